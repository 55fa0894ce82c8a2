from fastapi import HTTPException, status

from app.core.exceptions import (
    BadAgreement,
    DiscourseError,
    DslSyntaxError,
    DuplicateRuleId,
    UndeclaredEntity,
)

PARSE_ERRORS = (DslSyntaxError, DuplicateRuleId, UndeclaredEntity, BadAgreement)


def as_http_error(exc: DiscourseError) -> HTTPException:
    """Parse errors are unprocessable input; anything else is a bad request."""
    code = status.HTTP_422_UNPROCESSABLE_ENTITY if isinstance(exc, PARSE_ERRORS) else status.HTTP_400_BAD_REQUEST
    return HTTPException(status_code=code, detail=f"{type(exc).__name__}: {exc}")
