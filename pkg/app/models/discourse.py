import enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from pydantic import Field, model_validator

from app.core.exceptions import UndeclaredEntity
from app.core.order import StrictPartialOrder
from app.models.entity import Entity
from app.models.mention import GrammaticalFunction
from app.models.rule import DefeasibleRule
from app.models.utterance import LogicalForm, Proposition, PropositionPattern
from app.schemas.base import FrozenSchema


class CenterTransition(enum.Enum):
    ESTABLISH = "establish"
    CHAIN = "chain"


class CenterRecord(FrozenSchema):
    entity: str
    realized_gf: GrammaticalFunction
    # Consecutive utterances this entity has been Center via a subject pronoun, plus one.
    chain_length: int = Field(default=1, ge=1)
    transition: CenterTransition = CenterTransition.ESTABLISH


class AttentionalState(FrozenSchema):
    local: Tuple[str, ...] = ()
    salience: StrictPartialOrder = StrictPartialOrder()
    center: Optional[CenterRecord] = None
    background: FrozenSet[str] = frozenset()

    @model_validator(mode="after")
    def check_state(self):
        if self.center is not None and self.center.entity not in self.local:
            raise ValueError(f"center {self.center.entity} is not in the local state")
        missing = set(self.local) - self.salience.carrier
        if missing:
            raise ValueError(f"local entities {sorted(missing)} missing from salience")
        return self

    @property
    def local_set(self) -> FrozenSet[str]:
        return frozenset(self.local)


class AccommodationKind(enum.Enum):
    CONTRAST = "contrasting-proposition"
    QUESTION = "question"
    ENTITY_SET = "entity-set"
    BRIDGING = "bridging-assumption"


class AccommodationRecord(FrozenSchema):
    kind: AccommodationKind
    proposition: Optional[Proposition] = None
    question: Optional[PropositionPattern] = None
    entities: Tuple[Entity, ...] = ()
    rule: Optional[DefeasibleRule] = None

    @model_validator(mode="after")
    def check_payload(self):
        required = {
            AccommodationKind.CONTRAST: self.proposition,
            AccommodationKind.QUESTION: self.question,
            AccommodationKind.ENTITY_SET: self.entities or None,
            AccommodationKind.BRIDGING: self.rule,
        }[self.kind]
        if required is None:
            raise ValueError(f"{self.kind.value} record carries no payload")
        return self

    def describe(self) -> str:
        if self.kind == AccommodationKind.CONTRAST:
            return f"contrast {self.proposition}"
        if self.kind == AccommodationKind.QUESTION:
            return f"question {self.question}"
        if self.kind == AccommodationKind.ENTITY_SET:
            return "entities " + ",".join(e.id for e in self.entities)
        return f"bridging {self.rule}"


class DiscourseModel(FrozenSchema):
    facts: FrozenSet[Proposition] = frozenset()
    accommodated: Tuple[AccommodationRecord, ...] = ()
    entities: Dict[str, Entity] = {}

    @model_validator(mode="after")
    def check_ground(self):
        for fact in self.facts:
            if any(not arg for arg in fact.args):
                raise ValueError(f"fact {fact} has an unbound argument")
        return self

    def entity(self, entity_id: str) -> Entity:
        try:
            return self.entities[entity_id]
        except KeyError:
            raise UndeclaredEntity(f"Entity {entity_id} is not declared")

    def assert_fact(self, proposition: Proposition) -> "DiscourseModel":
        return self.model_copy(update={"facts": self.facts | {proposition}})

    def with_entities(self, entities: Iterable[Entity]) -> "DiscourseModel":
        registry = dict(self.entities)
        registry.update({e.id: e for e in entities})
        return self.model_copy(update={"entities": registry})

    def accommodated_propositions(self) -> FrozenSet[Proposition]:
        return frozenset(
            r.proposition for r in self.accommodated if r.kind == AccommodationKind.CONTRAST
        )

    def accommodated_rules(self) -> List[DefeasibleRule]:
        return [r.rule for r in self.accommodated if r.kind == AccommodationKind.BRIDGING]

    def accommodated_entities(self) -> List[Entity]:
        return [e for r in self.accommodated for e in r.entities]


class Context(FrozenSchema):
    """The triple of LF register, attentional state and discourse model."""

    lf_register: Optional[LogicalForm] = None
    attention: AttentionalState = AttentionalState()
    model: DiscourseModel = DiscourseModel()

    @model_validator(mode="after")
    def check_register(self):
        realized = set(self.lf_register.realized()) if self.lf_register else set()
        if realized != set(self.attention.local):
            raise ValueError("local attentional state differs from the LF register")
        return self

    @classmethod
    def initial(cls, entities: Iterable[Entity] = ()) -> "Context":
        return cls(model=DiscourseModel().with_entities(entities))
