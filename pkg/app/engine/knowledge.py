"""Commonsense (WK) layer: single-step defeasible derivation over the discourse model."""

from itertools import product
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from app.core.order import PreferenceClass, StrictPartialOrder
from app.models.discourse import DiscourseModel
from app.models.resolution import ClassConclusion
from app.models.rule import (
    DefeasibleRule,
    Derivation,
    DerivationStatus,
    RuleBook,
    is_variable,
)
from app.models.utterance import Polarity, Proposition, PropositionPattern
from app.utilities.logger import AppLogger

logger = AppLogger.get_logger("knowledge")

Binding = Dict[str, str]


def unify(terms: Sequence[str], args: Sequence[str], binding: Optional[Binding] = None) -> Optional[Binding]:
    if len(terms) != len(args):
        return None
    binding = dict(binding or {})
    for term, arg in zip(terms, args):
        if is_variable(term):
            if binding.setdefault(term, arg) != arg:
                return None
        elif term != arg:
            return None
    return binding


class KnowledgeEngine:
    def known(self, model: DiscourseModel) -> List[Proposition]:
        """Asserted and accommodated propositions, in a stable order."""
        return sorted(model.facts | model.accommodated_propositions(), key=str)

    def rules_for(self, model: DiscourseModel, rules: RuleBook) -> List[DefeasibleRule]:
        return list(rules.rules) + model.accommodated_rules()

    def derive(self, model: DiscourseModel, rules: RuleBook, goal: Proposition) -> Derivation:
        """
        Classify ``goal`` as asserted, defeasibly derived or underivable.

        A derivation is one forward step: a rule whose antecedent matches an
        asserted fact and whose consequent matches the goal. Predicates are
        compared through the rule book's synonym table.

        Accommodated contrast propositions count as known alongside the
        model's facts; a result that rests on one has ``accommodated`` set.
        """
        key = self._key(rules, goal)
        known = self.known(model)
        if any(self._key(rules, fact) == key for fact in model.facts):
            return Derivation(goal=goal, status=DerivationStatus.ASSERTED)
        if any(self._key(rules, fact) == key for fact in model.accommodated_propositions()):
            return Derivation(goal=goal, status=DerivationStatus.ASSERTED, accommodated=True)

        if goal.polarity == Polarity.POS:
            premises = [fact for fact in known if fact.polarity == Polarity.POS]
            for rule in self.rules_for(model, rules):
                if rules.canonical(rule.consequent.predicate) != key[0]:
                    continue
                binding = unify(rule.consequent.terms, goal.args)
                if binding is None:
                    continue
                antecedent = rules.canonical(rule.antecedent.predicate)
                for fact in premises:
                    if rules.canonical(fact.predicate) != antecedent:
                        continue
                    full = unify(rule.antecedent.terms, fact.args, binding)
                    if full is not None:
                        return Derivation(
                            goal=goal,
                            status=DerivationStatus.DERIVED,
                            rule_id=rule.id,
                            binding=tuple(sorted(full.items())),
                            premise=fact,
                            accommodated=fact not in model.facts,
                        )

        return Derivation(goal=goal, status=DerivationStatus.UNDERIVABLE)

    def derive_either(self, model: DiscourseModel, rules: RuleBook, goal: Proposition) -> Derivation:
        """Derivation of ``goal`` or, failing that, of its negation."""
        derivation = self.derive(model, rules, goal)
        if derivation.succeeded:
            return derivation
        negated = self.derive(model, rules, goal.negated())
        return negated if negated.succeeded else derivation

    def instance_derivation(
        self,
        candidate: str,
        pattern: PropositionPattern,
        focus_slot: int,
        model: DiscourseModel,
        rules: RuleBook,
        co_candidates: Optional[Mapping[int, Iterable[str]]] = None,
    ) -> Optional[Derivation]:
        """First successful derivation of ``pattern`` with ``candidate`` at the focus slot."""
        filled = pattern.fill(focus_slot, candidate)
        other_holes = filled.holes
        pools = [sorted(set((co_candidates or {}).get(slot, ())) - {candidate}) for slot in other_holes]
        for values in product(*pools):
            if len(set(values)) != len(values):
                continue
            derivation = self.derive(model, rules, filled.instantiate(values))
            if derivation.succeeded:
                return derivation
        return None

    def wk_preference(
        self,
        candidates: Iterable[str],
        pattern: PropositionPattern,
        model: DiscourseModel,
        rules: RuleBook,
        focus_slot: int = 0,
        co_candidates: Optional[Mapping[int, Iterable[str]]] = None,
    ) -> StrictPartialOrder:
        return self.wk_conclusion(
            candidates, pattern, model, rules, focus_slot, co_candidates
        ).order

    def wk_conclusion(
        self,
        candidates: Iterable[str],
        pattern: PropositionPattern,
        model: DiscourseModel,
        rules: RuleBook,
        focus_slot: int = 0,
        co_candidates: Optional[Mapping[int, Iterable[str]]] = None,
    ) -> ClassConclusion:
        candidates = sorted(set(candidates))
        derived: Dict[str, Derivation] = {}
        for candidate in candidates:
            derivation = self.instance_derivation(
                candidate, pattern, focus_slot, model, rules, co_candidates
            )
            if derivation is not None:
                derived[candidate] = derivation

        underivable = [c for c in candidates if c not in derived]
        pairs: List[Tuple[str, str]] = [(x, y) for x in derived for y in underivable]
        if pairs:
            note = "; ".join(d.describe() for d in derived.values())
        elif derived and len(candidates) > 1:
            note = f"symmetric derivation for {pattern}; no preference"
        else:
            note = f"no derivation distinguishes candidates for {pattern}"
        order = StrictPartialOrder.from_pairs(
            candidates, pairs, {pair: {PreferenceClass.WK} for pair in pairs}
        )
        logger.debug(f"WK over {candidates} for {pattern}: {order.render('≺')}")
        return ClassConclusion(
            preference_class=PreferenceClass.WK,
            order=order,
            note=note,
            derivations=tuple(derived[c] for c in sorted(derived)),
        )

    @staticmethod
    def _key(rules: RuleBook, proposition: Proposition):
        return rules.canonical(proposition.predicate), proposition.args, proposition.polarity


knowledge_engine = KnowledgeEngine()
