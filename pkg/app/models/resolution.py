import enum
from typing import FrozenSet, Optional, Tuple

from pydantic import model_validator

from app.core.order import PreferenceClass, StrictPartialOrder
from app.models.discourse import AccommodationRecord
from app.models.mention import Mention
from app.models.rule import Derivation, DerivationStatus
from app.models.utterance import Proposition, PropositionPattern, Utterance
from app.schemas.base import FrozenSchema


class Strength(enum.Enum):
    NORMAL = "normal"
    EXTREME = "extreme"


class TraceStep(FrozenSchema):
    # Rule that fired: SYN+SEM, GF-ORDER, CENTER, PARA, WK, OVERRIDE, REVERSE, DISCHARGE, ...
    rule: str
    detail: str

    def __str__(self) -> str:
        return f"{self.rule}: {self.detail}"


class ClassConclusion(FrozenSchema):
    preference_class: PreferenceClass
    order: StrictPartialOrder
    strength: Strength = Strength.NORMAL
    note: str = ""
    derivations: Tuple[Derivation, ...] = ()


class BasePreference(FrozenSchema):
    candidates: FrozenSet[str]
    order: StrictPartialOrder
    garden_path: bool = False
    # Pairs whose only support is LF (weakly preferred).
    weak_pairs: FrozenSet[Tuple[str, str]] = frozenset()
    trace: Tuple[TraceStep, ...] = ()

    @model_validator(mode="after")
    def check_carrier(self):
        if self.order.carrier != self.candidates:
            raise ValueError("base preference carrier differs from the candidate set")
        return self


class FocusScope(enum.Enum):
    PHRASE = "phrase"
    UTTERANCE = "utterance"


class FocusConstraint(FrozenSchema):
    scope: FocusScope
    pattern: PropositionPattern
    alternatives: FrozenSet[str]
    # Roles abstracted in the pattern, in slot order.
    focus_roles: Tuple[str, ...] = ()


class DischargeStatus(enum.Enum):
    CONTRAST_IN_CANDIDATES = "contrast-in-candidates"
    CONTRAST_IN_LOCAL = "contrast-in-local"
    ACCOMMODATED_QUESTION = "accommodated-question"
    INFELICITOUS = "infelicitous"


class DischargeOutcome(FrozenSchema):
    status: DischargeStatus
    contrasting_proposition: Optional[Proposition] = None
    accommodations: Tuple[AccommodationRecord, ...] = ()
    support: Optional[Derivation] = None
    # Alternatives available once the constraint is discharged.
    alternatives: FrozenSet[str] = frozenset()

    @model_validator(mode="after")
    def check_support(self):
        if self.status == DischargeStatus.CONTRAST_IN_CANDIDATES:
            if self.support is None or self.support.status == DerivationStatus.UNDERIVABLE:
                raise ValueError("contrast among candidates needs derivational support")
        if self.status != DischargeStatus.INFELICITOUS and len(self.alternatives) < 2:
            raise ValueError("a discharged focus constraint has at least two alternatives")
        return self

    @property
    def felicitous(self) -> bool:
        return self.status != DischargeStatus.INFELICITOUS


class Felicity(enum.Enum):
    OK = "ok"
    AMBIGUOUS = "ambiguous"
    INFELICITOUS = "infelicitous"
    GARDEN_PATH = "garden-path"


class ResolutionResult(FrozenSchema):
    role: str
    pronoun: Mention
    candidates: FrozenSet[str]
    conclusions: Tuple[ClassConclusion, ...] = ()
    base: BasePreference
    final_order: StrictPartialOrder
    value: FrozenSet[str]
    discharge: Optional[DischargeOutcome] = None
    felicity: Felicity = Felicity.OK
    trace: Tuple[TraceStep, ...] = ()

    @model_validator(mode="after")
    def check_complementary(self):
        if self.pronoun.stressed:
            if self.final_order != self.base.order.reverse():
                raise ValueError("stressed final order must reverse the base order")
        else:
            if self.final_order != self.base.order:
                raise ValueError("unstressed final order must equal the base order")
            if self.discharge is not None:
                raise ValueError("unstressed pronouns carry no discharge")
        return self

    @property
    def determinate(self) -> bool:
        return len(self.value) == 1

    @property
    def target(self) -> str:
        return f"{self.role} '{self.pronoun.surface}'"


class ResolutionError(FrozenSchema):
    role: str
    surface: str
    error: str
    detail: str


class UtteranceResolution(FrozenSchema):
    label: str
    results: Tuple[ResolutionResult, ...] = ()
    errors: Tuple[ResolutionError, ...] = ()
    # The utterance as registered: determinate pronouns resolved, the rest dropped.
    resolved: Utterance
    constraint: Optional[FocusConstraint] = None
    discharge: Optional[DischargeOutcome] = None
    accommodations: Tuple[AccommodationRecord, ...] = ()
    trace: Tuple[TraceStep, ...] = ()

    def result(self, role: str) -> Optional[ResolutionResult]:
        for result in self.results:
            if result.role == role:
                return result
        return None
