import enum
from typing import Iterable, List, Optional, Sequence, Tuple

from pydantic import Field, model_validator

from app.core.exceptions import UnresolvedMention
from app.models.mention import GrammaticalFunction, Mention
from app.schemas.base import FrozenSchema


class Polarity(enum.Enum):
    POS = "pos"
    NEG = "neg"

    def flipped(self) -> "Polarity":
        return Polarity.NEG if self == Polarity.POS else Polarity.POS


class Proposition(FrozenSchema):
    predicate: str
    args: Tuple[str, ...] = ()
    polarity: Polarity = Polarity.POS

    def negated(self) -> "Proposition":
        return self.model_copy(update={"polarity": self.polarity.flipped()})

    def __str__(self) -> str:
        prefix = "¬" if self.polarity == Polarity.NEG else ""
        return f"{prefix}{self.predicate}({','.join(self.args)})"


class PropositionPattern(FrozenSchema):
    """A proposition with abstracted positions (``None`` slots)."""

    predicate: str
    slots: Tuple[Optional[str], ...] = ()
    roles: Tuple[str, ...] = ()
    polarity: Polarity = Polarity.POS

    @model_validator(mode="after")
    def check_roles(self):
        if self.roles and len(self.roles) != len(self.slots):
            raise ValueError("roles and slots differ in length")
        return self

    @property
    def holes(self) -> Tuple[int, ...]:
        return tuple(i for i, value in enumerate(self.slots) if value is None)

    def slot_of(self, role: str) -> int:
        return self.roles.index(role)

    def fill(self, index: int, value: str) -> "PropositionPattern":
        slots = list(self.slots)
        slots[index] = value
        return self.model_copy(update={"slots": tuple(slots)})

    def instantiate(self, values: Sequence[str]) -> Proposition:
        """Fill the holes left to right."""
        values = list(values)
        if len(values) != len(self.holes):
            raise ValueError(f"{len(self.holes)} holes, {len(values)} values")
        filled = iter(values)
        args = tuple(next(filled) if slot is None else slot for slot in self.slots)
        return Proposition(predicate=self.predicate, args=args, polarity=self.polarity)

    def __str__(self) -> str:
        prefix = "¬" if self.polarity == Polarity.NEG else ""
        body = ",".join("?" if slot is None else slot for slot in self.slots)
        return f"{prefix}{self.predicate}({body})"


class LogicalForm(FrozenSchema):
    predicate: str
    args: Tuple[Tuple[str, Mention], ...] = ()
    polarity: Polarity = Polarity.POS

    @model_validator(mode="after")
    def check_core_functions(self):
        seen = set()
        for role, mention in self.args:
            if mention.gf.core:
                if mention.gf in seen:
                    raise ValueError(f"{mention.gf.value} appears twice in {self.predicate}")
                seen.add(mention.gf)
        return self

    def mention(self, role: str) -> Mention:
        for label, mention in self.args:
            if label == role:
                return mention
        raise KeyError(role)

    def pronouns(self) -> List[Tuple[str, Mention]]:
        return [(role, m) for role, m in self.args if m.pronominal]

    def core_args(self) -> List[Tuple[str, Mention]]:
        core = [(role, m) for role, m in self.args if m.gf.core]
        return sorted(core, key=lambda item: item[1].gf.rank)

    def ranked_args(self) -> List[Tuple[str, Mention]]:
        """Arguments by GF ORDER, argument order breaking ties."""
        indexed = list(enumerate(self.args))
        indexed.sort(key=lambda item: (item[1][1].gf.rank, item[0]))
        return [arg for _, arg in indexed]

    def realized(self) -> Tuple[str, ...]:
        ordered: List[str] = []
        for _, mention in self.ranked_args():
            for entity_id in mention.realized():
                if entity_id not in ordered:
                    ordered.append(entity_id)
        return tuple(ordered)

    def gf_of(self, entity_id: str) -> Optional[GrammaticalFunction]:
        """Highest-ranked GF at which the entity is realized."""
        for _, mention in self.ranked_args():
            if entity_id in mention.realized():
                return mention.gf
        return None

    def proposition(self) -> Proposition:
        args = []
        for role, mention in self.core_args():
            if mention.referent is None:
                raise UnresolvedMention(f"{role} '{mention.surface}' in {self.predicate} is unresolved")
            args.append(mention.referent)
        return Proposition(predicate=self.predicate, args=tuple(args), polarity=self.polarity)

    def content_pattern(self, holes: Iterable[str] = ()) -> PropositionPattern:
        """Core content with the given roles, and every unresolved mention, abstracted."""
        holes = set(holes)
        slots, roles = [], []
        for role, mention in self.core_args():
            roles.append(role)
            slots.append(None if role in holes or mention.referent is None else mention.referent)
        return PropositionPattern(
            predicate=self.predicate,
            slots=tuple(slots),
            roles=tuple(roles),
            polarity=self.polarity,
        )

    def focus_pattern(self, roles: Sequence[str]) -> PropositionPattern:
        """Content pattern with focused roles abstracted; focused adjuncts get trailing slots."""
        pattern = self.content_pattern(holes=roles)
        extra = tuple(role for role in roles if role not in pattern.roles)
        if not extra:
            return pattern
        return pattern.model_copy(
            update={"slots": pattern.slots + (None,) * len(extra), "roles": pattern.roles + extra}
        )

    def with_mention(self, role: str, mention: Mention) -> "LogicalForm":
        args = tuple((label, mention if label == role else m) for label, m in self.args)
        return self.model_copy(update={"args": args})

    def without(self, roles: Iterable[str]) -> "LogicalForm":
        roles = set(roles)
        return self.model_copy(
            update={"args": tuple((label, m) for label, m in self.args if label not in roles)}
        )

    def is_resolved(self) -> bool:
        return all(m.resolved for _, m in self.args)


class Utterance(FrozenSchema):
    index: int = Field(ge=1)
    label: str
    lf: LogicalForm
    segment_initial: bool = False
    relation: Optional[str] = None
    variant_of: Optional[str] = None
    # Set when undeterminable pronouns were dropped; no proposition is asserted.
    incomplete: bool = False

    def with_lf(self, lf: LogicalForm) -> "Utterance":
        return self.model_copy(update={"lf": lf})
