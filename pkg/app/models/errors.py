from pydantic import ValidationError


class SignBalanceError(ValueError):
    """Base error for bad input; routes turn it into exit status 2"""


class WindowParseError(SignBalanceError):
    pass


class RestrictionError(SignBalanceError):
    pass


class DomainError(SignBalanceError):
    """Element lies outside the family or involution domain"""


class SchemaError(SignBalanceError):
    """Identity parameters do not match the catalog entry"""


class InvariantBreach(RuntimeError):
    """An internal consistency check failed; routes exit with status 3"""


def one_line(e: Exception) -> str:
    """First validation message of a pydantic error, else str(e)"""
    if isinstance(e, ValidationError) and e.errors():
        first = e.errors()[0]
        message = first["msg"].removeprefix("Value error, ")
        field = ".".join(str(part) for part in first.get("loc", ()))
        return f"{field}: {message}" if field else message
    return str(e)
