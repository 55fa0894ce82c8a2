import enum
from typing import Tuple

from pydantic import Field, model_validator

from app.schemas.base import FrozenSchema


class Sort(enum.Enum):
    PERSON = "PERSON"
    ANIMAL = "ANIMAL"
    PLACE = "PLACE"
    GROUP = "GROUP"
    THING = "THING"


class Gender(enum.Enum):
    MASC = "masc"
    FEM = "fem"
    NEUT = "neut"
    UNKNOWN = "unknown"


class GrammaticalNumber(enum.Enum):
    SG = "sg"
    PL = "pl"


# Sorts a gendered pronoun (he/she) may refer to.
PERSONHOOD_SORTS = frozenset({Sort.PERSON, Sort.ANIMAL})


class Entity(FrozenSchema):
    id: str
    name: str = ""
    sort: Sort = Sort.THING
    gender: Gender = Gender.UNKNOWN
    number: GrammaticalNumber = GrammaticalNumber.SG
    person: int = Field(default=3, ge=1, le=3)
    accommodated: bool = False
    members: Tuple[str, ...] = ()

    @model_validator(mode="after")
    def check_group(self):
        if self.sort == Sort.GROUP:
            if self.number != GrammaticalNumber.PL:
                raise ValueError(f"group {self.id} must be plural")
            if not self.members:
                raise ValueError(f"group {self.id} lists no members")
        elif self.members:
            raise ValueError(f"only GROUP entities have members ({self.id})")
        return self

    @property
    def display_name(self) -> str:
        return self.name or self.id

    def admits_personhood(self) -> bool:
        return self.sort in PERSONHOOD_SORTS
