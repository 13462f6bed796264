"""Exception hierarchy shared by every module of the package."""


class HouinError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(HouinError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateEntryError(HouinError, ValueError):
    pass


class MissingTransactionError(HouinError, KeyError):
    pass


class AbsentItemError(HouinError, KeyError):
    pass


class MissingItemError(HouinError, KeyError):
    pass


class PeriodRangeError(HouinError, IndexError):
    pass


class UndefinedRatioError(HouinError, ArithmeticError):
    pass


class StructuralError(HouinError, ValueError):
    """Two database views do not share tids and period layout."""


class ContractError(HouinError, ValueError):
    """A caller violated a documented precondition (e.g. path order)."""


class InconsistencyError(HouinError, RuntimeError):
    """Tree maintenance state no longer matches the database it tracks."""


class ConfigError(HouinError, ValueError):
    pass


class RefusalError(HouinError, RuntimeError):
    """The brute-force oracle refuses inputs too large to enumerate."""


class StateMismatchError(HouinError):
    """A state snapshot does not match the database it claims to describe."""
