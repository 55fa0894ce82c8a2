from pydantic import BaseModel


class BaseSchema(BaseModel):
    class Config:
        from_attributes = True


class FrozenSchema(BaseModel):
    """Immutable value type; operations return new instances."""

    class Config:
        frozen = True


class BaseResponseSchema(BaseModel):
    status: int
    detail: str

    class Config:
        from_attributes = True
