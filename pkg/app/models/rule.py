import enum
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from pydantic import model_validator

from app.core.exceptions import DuplicateRuleId
from app.models.utterance import Proposition
from app.schemas.base import FrozenSchema


def is_variable(term: str) -> bool:
    return term[:1].isupper()


class RuleKind(enum.Enum):
    CAUSAL = "causal"
    BRIDGING = "bridging"


class Atom(FrozenSchema):
    predicate: str
    terms: Tuple[str, ...] = ()

    def variables(self) -> FrozenSet[str]:
        return frozenset(t for t in self.terms if is_variable(t))

    def ground(self, binding: Mapping[str, str]) -> Proposition:
        args = tuple(binding[t] if is_variable(t) else t for t in self.terms)
        return Proposition(predicate=self.predicate, args=args)

    def __str__(self) -> str:
        return f"{self.predicate}({','.join(self.terms)})"


class DefeasibleRule(FrozenSchema):
    """``if antecedent then normally consequent``."""

    id: str
    antecedent: Atom
    consequent: Atom
    kind: RuleKind = RuleKind.CAUSAL

    @model_validator(mode="after")
    def check_bound(self):
        unbound = self.consequent.variables() - self.antecedent.variables()
        if unbound:
            raise ValueError(f"rule {self.id}: unbound consequent variables {sorted(unbound)}")
        return self

    def __str__(self) -> str:
        tag = " [bridging]" if self.kind == RuleKind.BRIDGING else ""
        return f"rule {self.id}{tag}: {self.antecedent} ~> {self.consequent}."


class RuleBook(FrozenSchema):
    rules: Tuple[DefeasibleRule, ...] = ()
    # predicate -> canonical predicate
    synonyms: Dict[str, str] = {}

    def canonical(self, predicate: str) -> str:
        return self.synonyms.get(predicate, predicate)

    def with_synonyms(self, head: str, predicates: Iterable[str]) -> "RuleBook":
        """
        Join ``head`` and ``predicates`` into one synonym class.

        The table stays flat: every member maps straight to the class
        representative, which is the representative ``head`` already had.
        """
        synonyms = dict(self.synonyms)
        root = synonyms.get(head, head)
        for predicate in predicates:
            joined = synonyms.get(predicate, predicate)
            if joined == root:
                continue
            for member, canonical in list(synonyms.items()):
                if canonical == joined:
                    synonyms[member] = root
            synonyms[joined] = root
        return self.model_copy(update={"synonyms": synonyms})

    def get(self, rule_id: str) -> Optional[DefeasibleRule]:
        for rule in self.rules:
            if rule.id == rule_id:
                return rule
        return None

    def ids(self) -> List[str]:
        return [rule.id for rule in self.rules]

    def with_rule(self, rule: DefeasibleRule) -> "RuleBook":
        if self.get(rule.id) is not None:
            raise DuplicateRuleId(f"Rule {rule.id} is already defined")
        return self.model_copy(update={"rules": self.rules + (rule,)})

    def merge(self, other: "RuleBook") -> "RuleBook":
        book = self
        for rule in other.rules:
            book = book.with_rule(rule)
        for canonical, predicates in other.synonym_groups().items():
            book = book.with_synonyms(canonical, predicates)
        return book

    def synonym_groups(self) -> Dict[str, List[str]]:
        groups: Dict[str, List[str]] = {}
        for predicate, canonical in self.synonyms.items():
            if predicate != canonical:
                groups.setdefault(canonical, []).append(predicate)
        return {canonical: sorted(preds) for canonical, preds in sorted(groups.items())}


class DerivationStatus(enum.Enum):
    ASSERTED = "asserted"
    DERIVED = "defeasibly-derived"
    UNDERIVABLE = "underivable"


class Derivation(FrozenSchema):
    goal: Proposition
    status: DerivationStatus
    rule_id: Optional[str] = None
    binding: Tuple[Tuple[str, str], ...] = ()
    # The asserted antecedent instance the rule fired on.
    premise: Optional[Proposition] = None
    # Rests on an accommodated proposition rather than a model fact.
    accommodated: bool = False

    @model_validator(mode="after")
    def check_via(self):
        if self.status == DerivationStatus.DERIVED and self.rule_id is None:
            raise ValueError("a defeasible derivation names its rule")
        return self

    @property
    def succeeded(self) -> bool:
        return self.status != DerivationStatus.UNDERIVABLE

    def describe(self) -> str:
        if self.status == DerivationStatus.DERIVED:
            return f"{self.goal} via {self.rule_id} from {self.premise}"
        return f"{self.goal} {self.status.value}"
