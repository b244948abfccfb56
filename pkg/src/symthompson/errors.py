"""Exception hierarchy.

Every error raised on purpose by the library derives from ``SymThompsonError``.
The CLI maps the subclasses onto exit codes: input problems exit with 2,
resource bounds with 3.
"""


class SymThompsonError(Exception):
    pass


class InputError(SymThompsonError, ValueError):
    """Malformed or inconsistent input data."""


class BoundExceededError(SymThompsonError):
    """A configured enumeration or size bound would be exceeded."""


class InvalidArityError(InputError):
    pass


class ArityMismatchError(InputError):
    pass


class NotALeafError(InputError):
    pass


class UnderspecifiedPointError(InputError):
    pass


class DepthLimitError(BoundExceededError):
    pass


class QConflictError(InputError):
    """Two words equal in H were assigned different boundary permutations."""


class SizeLimitError(BoundExceededError):
    pass


class GroupMismatchError(InputError):
    pass


class BallSizeLimitError(BoundExceededError):
    pass


class NotComparableError(InputError):
    pass


class ParseError(InputError):
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
