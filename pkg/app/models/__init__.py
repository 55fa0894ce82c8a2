# Re-export the discourse vocabulary
from .entity import Entity, Gender, GrammaticalNumber, Sort
from .mention import Agreement, GrammaticalFunction, Mention, MentionKind
from .utterance import LogicalForm, Polarity, Proposition, PropositionPattern, Utterance
from .rule import Atom, DefeasibleRule, Derivation, DerivationStatus, RuleBook, RuleKind
from .discourse import (
    AccommodationKind,
    AccommodationRecord,
    AttentionalState,
    CenterRecord,
    CenterTransition,
    Context,
    DiscourseModel,
)
from .resolution import (
    BasePreference,
    ClassConclusion,
    DischargeOutcome,
    DischargeStatus,
    Felicity,
    FocusConstraint,
    FocusScope,
    ResolutionResult,
    Strength,
    TraceStep,
    UtteranceResolution,
)

__all__ = [
    "Entity",
    "Gender",
    "GrammaticalNumber",
    "Sort",
    "Agreement",
    "GrammaticalFunction",
    "Mention",
    "MentionKind",
    "LogicalForm",
    "Polarity",
    "Proposition",
    "PropositionPattern",
    "Utterance",
    "Atom",
    "DefeasibleRule",
    "Derivation",
    "DerivationStatus",
    "RuleBook",
    "RuleKind",
    "AccommodationKind",
    "AccommodationRecord",
    "AttentionalState",
    "CenterRecord",
    "CenterTransition",
    "Context",
    "DiscourseModel",
    "BasePreference",
    "ClassConclusion",
    "DischargeOutcome",
    "DischargeStatus",
    "Felicity",
    "FocusConstraint",
    "FocusScope",
    "ResolutionResult",
    "Strength",
    "TraceStep",
    "UtteranceResolution",
]
