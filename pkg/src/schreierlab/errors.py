class SchreierError(Exception):
    pass


class ValidationError(SchreierError, ValueError):
    pass


class ResourceLimitError(SchreierError):
    """Raised when a vertex or coset budget is exhausted."""


class MonotonicityError(SchreierError):
    pass


class ParseError(SchreierError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
