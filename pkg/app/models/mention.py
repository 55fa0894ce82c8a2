import enum
from typing import Optional, Tuple

from pydantic import Field, model_validator

from app.models.entity import Gender, GrammaticalNumber
from app.schemas.base import FrozenSchema


class MentionKind(enum.Enum):
    ZERO = "zero-pronominal"
    PRONOUN = "pronoun"
    DEFINITE = "definite-np"
    INDEFINITE = "indefinite-np"

    @property
    def rank(self) -> int:
        """EXP ORDER position, 0 is the highest-ranked expression type."""
        return list(MentionKind).index(self)

    @property
    def pronominal(self) -> bool:
        return self in (MentionKind.ZERO, MentionKind.PRONOUN)


class GrammaticalFunction(enum.Enum):
    SUBJECT = "subject"
    OBJECT = "object"
    OBJECT2 = "object2"
    OTHER = "other"

    @property
    def rank(self) -> int:
        """GF ORDER position, 0 is the highest-ranked function."""
        return list(GrammaticalFunction).index(self)

    @property
    def core(self) -> bool:
        return self != GrammaticalFunction.OTHER

    @classmethod
    def from_role(cls, role: str) -> "GrammaticalFunction":
        return {
            "subj": cls.SUBJECT,
            "obj": cls.OBJECT,
            "obj2": cls.OBJECT2,
        }.get(role.lower(), cls.OTHER)


class Agreement(FrozenSchema):
    gender: Gender = Gender.UNKNOWN
    number: GrammaticalNumber = GrammaticalNumber.SG
    person: int = Field(default=3, ge=1, le=3)


class Mention(FrozenSchema):
    surface: str
    kind: MentionKind
    stressed: bool = False
    gf: GrammaticalFunction = GrammaticalFunction.OTHER
    agreement: Agreement = Agreement()
    referent: Optional[str] = None
    # Conjunct entity ids of a conjoined NP; the referent is then the group.
    conjuncts: Tuple[str, ...] = ()

    @model_validator(mode="after")
    def check_mention(self):
        if self.stressed and self.kind != MentionKind.PRONOUN:
            raise ValueError("only pronouns can be stressed")
        if not self.kind.pronominal and self.referent is None:
            raise ValueError(f"{self.kind.value} mention '{self.surface}' has no referent")
        if self.conjuncts and self.kind.pronominal:
            raise ValueError("a pronoun cannot be conjoined")
        return self

    @property
    def pronominal(self) -> bool:
        return self.kind.pronominal

    @property
    def resolved(self) -> bool:
        return self.referent is not None

    def realized(self) -> Tuple[str, ...]:
        """Entity ids this mention realizes: the referent, then any conjuncts."""
        if self.referent is None:
            return ()
        return (self.referent,) + self.conjuncts

    def resolve_to(self, entity_id: str) -> "Mention":
        return self.model_copy(update={"referent": entity_id})

    def counterpart(self) -> "Mention":
        """The same pronoun with its stress flipped."""
        surface = self.surface.lower() if self.stressed else self.surface.upper()
        return self.model_copy(
            update={"stressed": not self.stressed, "referent": None, "surface": surface}
        )
