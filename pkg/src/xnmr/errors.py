"""Exception hierarchy shared by every stage of the pipeline."""


class XnmrError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(XnmrError):
    """Malformed program or query text.

    ``line`` and ``column`` are 1-based and always point inside the input
    (or one past its last character, for unexpected end of input).
    """

    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"syntax error at line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


class SafetyError(XnmrError):
    """A rule or query variable lacks a positive body occurrence."""

    def __init__(self, rule_index: int, variable: str, line: int | None = None):
        where = f"rule {rule_index}" if rule_index >= 0 else "query"
        if line is not None:
            where += f" (line {line})"
        super().__init__(
            f"unsafe {where}: variable {variable} does not occur in a positive body literal"
        )
        self.rule_index = rule_index
        self.variable = variable
        self.line = line


class ResourceLimitExceeded(XnmrError):
    def __init__(self, limit: int):
        super().__init__(f"grounding exceeds the limit of {limit} ground atoms")
        self.limit = limit


class InternalPredicateClash(XnmrError):
    def __init__(self, name: str):
        super().__init__(f"predicate {name} uses the reserved '__' prefix")
        self.name = name


class FormatError(XnmrError):
    """Malformed XGF document."""

    def __init__(self, line: int, message: str):
        super().__init__(f"xgf line {line}: {message}")
        self.line = line
        self.message = message


class OracleTooLarge(XnmrError):
    def __init__(self, size: int, bound: int):
        super().__init__(f"brute-force oracle limited to {bound} atoms, got {size}")
        self.size = size
        self.bound = bound
