from itertools import product
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

import networkx as nx

from app.config import Settings, settings as default_settings
from app.core.exceptions import EmptyLocalState, NoCandidates
from app.core.order import OVERRIDE_ORDER, Pair, PreferenceClass, StrictPartialOrder, render_set
from app.engine.attention import AttentionEngine, attention_engine
from app.engine.knowledge import KnowledgeEngine, knowledge_engine
from app.models.discourse import Context
from app.models.entity import Entity, Gender
from app.models.mention import Mention
from app.models.resolution import (
    BasePreference,
    ClassConclusion,
    Felicity,
    ResolutionResult,
    Strength,
    TraceStep,
)
from app.models.rule import RuleBook
from app.models.utterance import LogicalForm
from app.utilities.logger import AppLogger

logger = AppLogger.get_logger("resolver")


def cancel_contradictions(pairs: Iterable[Pair]) -> Set[Pair]:
    """Drop pairs that take part in a cycle, including direct contradictions."""
    pairs = set(pairs)
    graph = nx.DiGraph(list(pairs))
    doomed: Set[Pair] = set()
    for component in nx.strongly_connected_components(graph):
        if len(component) > 1:
            doomed.update(p for p in pairs if p[0] in component and p[1] in component)
    return pairs - doomed


def score_assignment(
    assignment: Mapping[str, str], orders: Mapping[str, StrictPartialOrder]
) -> Tuple[int, ...]:
    """Satisfied minus violated pairs per preference class, strongest class first."""
    totals = {cls: 0 for cls in OVERRIDE_ORDER}
    for role, value in assignment.items():
        for (x, y), tags in orders[role].support_map().items():
            sign = 1 if value == x else -1 if value == y else 0
            for tag in tags:
                totals[tag] += sign
    return tuple(totals[cls] for cls in OVERRIDE_ORDER)


class ResolverEngine:
    """Unstressed-pronoun resolution under the override lattice SYN+SEM > WK > ATT > LF."""

    def __init__(
        self,
        config: Optional[Settings] = None,
        attention: Optional[AttentionEngine] = None,
        knowledge: Optional[KnowledgeEngine] = None,
    ):
        self.settings = config or default_settings
        self.attention = attention or attention_engine
        self.knowledge = knowledge or knowledge_engine

    @staticmethod
    def agrees(pronoun: Mention, entity: Entity) -> bool:
        features = pronoun.agreement
        if Gender.UNKNOWN not in (features.gender, entity.gender):
            if features.gender != entity.gender:
                return False
        if features.number != entity.number or features.person != entity.person:
            return False
        if features.gender in (Gender.MASC, Gender.FEM) and not entity.admits_personhood():
            return False
        return True

    def candidate_set(
        self, pronoun: Mention, ctx: Context, clause: Optional[LogicalForm] = None
    ) -> FrozenSet[str]:
        """
        SYN+SEM filter: local entities that agree with the pronoun, minus the
        referents of non-pronominal co-arguments in ``clause``.

        Raises:
            EmptyLocalState: the input local attentional state is empty.
        """
        local, _ = self.attention.local_state(ctx)
        if not local:
            raise EmptyLocalState(f"No local entities to resolve '{pronoun.surface}' against")
        excluded: Set[str] = set()
        if clause is not None:
            for _, mention in clause.args:
                if not mention.pronominal:
                    excluded.update(mention.realized())
        return frozenset(
            e for e in local if e not in excluded and self.agrees(pronoun, ctx.model.entity(e))
        )

    def att_preference(self, pronoun: Mention, ctx: Context, candidates: Iterable[str]) -> ClassConclusion:
        candidates = frozenset(candidates)
        _, salience = self.attention.local_state(ctx)
        ranked = salience.restrict(candidates)
        top = ranked.maximal()
        pairs = [(x, y) for x in sorted(top) for y in sorted(candidates - top)]
        order = StrictPartialOrder.from_pairs(
            candidates, pairs, {p: {PreferenceClass.ATT} for p in pairs}
        )

        center = ctx.attention.center
        strength = Strength.NORMAL
        if (
            center is not None
            and center.entity in candidates
            and center.chain_length >= self.settings.GARDEN_PATH_THRESHOLD
        ):
            strength = Strength.EXTREME

        if pairs:
            note = f"maximally salient {render_set(top)} over {render_set(candidates - top)}"
        else:
            note = f"salience indeterminate among {render_set(candidates)}"
        if center is not None and center.entity in candidates:
            note += f"; Center {center.entity} chain {center.chain_length}"
        return ClassConclusion(
            preference_class=PreferenceClass.ATT, order=order, strength=strength, note=note
        )

    def lf_preference(self, pronoun: Mention, ctx: Context, candidates: Iterable[str]) -> ClassConclusion:
        candidates = frozenset(candidates)
        register = ctx.lf_register
        parallel: Set[str] = set()
        if register is not None:
            for _, mention in register.args:
                if mention.gf == pronoun.gf:
                    parallel.update(e for e in mention.realized() if e in candidates)
        others = candidates - parallel
        pairs = [(x, y) for x in sorted(parallel) for y in sorted(others)]
        order = StrictPartialOrder.from_pairs(
            candidates, pairs, {p: {PreferenceClass.LF} for p in pairs}
        )
        if pairs:
            note = f"{render_set(parallel)} parallel at {pronoun.gf.value}"
        else:
            note = f"no parallelism distinguishes {render_set(candidates)}"
        return ClassConclusion(preference_class=PreferenceClass.LF, order=order, note=note)

    def wk_preference(
        self,
        role: str,
        ctx: Context,
        candidates: Iterable[str],
        rules: RuleBook,
        clause: Optional[LogicalForm] = None,
    ) -> ClassConclusion:
        candidates = frozenset(candidates)
        core_roles = [r for r, _ in clause.core_args()] if clause is not None else []
        if role not in core_roles:
            return ClassConclusion(
                preference_class=PreferenceClass.WK,
                order=StrictPartialOrder.empty(candidates),
                note="pronoun is outside the clause content",
            )
        pattern = clause.content_pattern(holes=[role])
        co_candidates = {}
        for other, mention in clause.core_args():
            if other != role and mention.referent is None:
                co_candidates[pattern.slot_of(other)] = self.candidate_set(mention, ctx, clause)
        return self.knowledge.wk_conclusion(
            candidates, pattern, ctx.model, rules, pattern.slot_of(role), co_candidates
        )

    def combine(
        self, conclusions: Sequence[ClassConclusion], candidates: Iterable[str]
    ) -> BasePreference:
        """
        Merge class conclusions top-down through the override lattice.

        A pair survives unless the stronger classes already accepted its
        reverse, or it would close a cycle with them. Support tags are
        unioned over the pairs each class contributes.
        """
        candidates = frozenset(candidates)
        edges: Set[Pair] = set()
        tags: Dict[Pair, Set[PreferenceClass]] = {}
        order = StrictPartialOrder.empty(candidates)
        trace: List[TraceStep] = []
        garden_path = False

        for cls in OVERRIDE_ORDER:
            current = [c for c in conclusions if c.preference_class == cls]
            if not current:
                continue
            proposed: Set[Pair] = set()
            for conclusion in current:
                proposed.update(conclusion.order.pairs)
            consistent = cancel_contradictions(proposed)
            for x, y in sorted(proposed - consistent):
                trace.append(TraceStep(rule="CANCEL", detail=f"{cls.value} pair {x}≺{y} contradicted within {cls.value}"))

            kept = {p for p in consistent if (p[1], p[0]) not in order.pairs}
            kept = cancel_contradictions(order.pairs | kept) & kept
            overridden = consistent - kept
            for x, y in sorted(overridden):
                trace.append(
                    TraceStep(rule="OVERRIDE", detail=f"{cls.value} pair {x}≺{y} overridden by {self._winner(order, x, y)}")
                )
            if cls == PreferenceClass.ATT and overridden:
                extreme = any(c.strength == Strength.EXTREME for c in current)
                if extreme and any(PreferenceClass.WK in order.support_of(y, x) for x, y in overridden):
                    garden_path = True
                    trace.append(
                        TraceStep(rule="GARDEN-PATH", detail="WK retracts an extremely strong attentional preference")
                    )

            edges |= kept
            for pair in kept:
                tags.setdefault(pair, set()).add(cls)
            order = StrictPartialOrder.from_pairs(candidates, edges, tags)

        weak = frozenset(p for p, t in order.support_map().items() if t == {PreferenceClass.LF})
        if weak:
            trace.append(TraceStep(rule="WEAK", detail=", ".join(f"{x}≺?{y}" for x, y in sorted(weak))))
        return BasePreference(
            candidates=candidates,
            order=order,
            garden_path=garden_path,
            weak_pairs=weak,
            trace=tuple(trace),
        )

    def base_preference(
        self,
        role: str,
        pronoun: Mention,
        ctx: Context,
        rules: RuleBook,
        clause: Optional[LogicalForm] = None,
    ) -> Tuple[Tuple[ClassConclusion, ...], BasePreference, List[TraceStep]]:
        """Locate the candidates and compute the unstressed counterpart's preference."""
        candidates = self.candidate_set(pronoun, ctx, clause)
        local = render_set(ctx.attention.local)
        trace = [TraceStep(rule="SYN+SEM", detail=f"H = {render_set(candidates)} from A^LOC {local}")]
        if not candidates:
            raise NoCandidates(f"No local entity agrees with '{pronoun.surface}' ({role})")

        conclusions = (
            self.wk_preference(role, ctx, candidates, rules, clause),
            self.att_preference(pronoun, ctx, candidates),
            self.lf_preference(pronoun, ctx, candidates),
        )
        rule_names = {PreferenceClass.WK: "WK", PreferenceClass.ATT: "EXP-ORDER", PreferenceClass.LF: "PARA"}
        for conclusion in conclusions:
            label = rule_names[conclusion.preference_class]
            if conclusion.strength == Strength.EXTREME:
                label += "(extreme)"
            trace.append(TraceStep(rule=label, detail=conclusion.note))
            for derivation in conclusion.derivations:
                if derivation.rule_id:
                    trace.append(TraceStep(rule=derivation.rule_id, detail=derivation.describe()))

        base = self.combine(conclusions, candidates)
        trace.extend(base.trace)
        return conclusions, base, trace

    def resolve_unstressed(
        self,
        pronoun: Mention,
        ctx: Context,
        rules: RuleBook,
        role: Optional[str] = None,
        clause: Optional[LogicalForm] = None,
        relation: Optional[str] = None,
    ) -> ResolutionResult:
        role = role or pronoun.gf.value
        conclusions, base, trace = self.base_preference(role, pronoun, ctx, rules, clause)
        value = base.order.maximal()
        coherence = self.coherence_step(relation, conclusions)
        if coherence is not None:
            trace.append(coherence)
        result = ResolutionResult(
            role=role,
            pronoun=pronoun,
            candidates=base.candidates,
            conclusions=conclusions,
            base=base,
            final_order=base.order,
            value=value,
            felicity=self.felicity(value, base),
            trace=tuple(trace),
        )
        logger.info(f"{result.target} := {render_set(value)} ({result.felicity.value})")
        return result

    def assign_jointly(
        self,
        orders: Mapping[str, StrictPartialOrder],
    ) -> Tuple[Dict[str, FrozenSet[str]], List[TraceStep]]:
        """
        Values for co-argument pronouns with pairwise-distinct referents.

        Each pronoun keeps its own maximal values when some distinct
        combination of them exists. Otherwise every distinct assignment is
        scored class by class and the best ones win; ties widen the values.
        """
        roles = sorted(orders)
        maximal = {role: orders[role].maximal() for role in roles}
        preferred = self._distinct([sorted(maximal[r]) for r in roles])
        if preferred:
            values = {r: frozenset(a[i] for a in preferred) for i, r in enumerate(roles)}
            return values, [TraceStep(rule="JOINT", detail=self._render(values))]

        assignments = self._distinct([sorted(orders[r].carrier) for r in roles])
        if not assignments:
            return maximal, [TraceStep(rule="JOINT", detail="no disjoint assignment; values kept")]
        scored = [(score_assignment(dict(zip(roles, a)), orders), a) for a in assignments]
        best = max(score for score, _ in scored)
        winners = [a for score, a in scored if score == best]
        values = {r: frozenset(a[i] for a in winners) for i, r in enumerate(roles)}
        detail = f"disjoint reference; best score {best}: {self._render(values)}"
        return values, [TraceStep(rule="JOINT", detail=detail)]

    @staticmethod
    def felicity(value: FrozenSet[str], base: BasePreference) -> Felicity:
        if len(value) > 1:
            return Felicity.AMBIGUOUS
        if base.garden_path:
            return Felicity.GARDEN_PATH
        return Felicity.OK

    @staticmethod
    def coherence_step(
        relation: Optional[str], conclusions: Iterable[ClassConclusion]
    ) -> Optional[TraceStep]:
        parts = [f"relation {relation}"] if relation else []
        for conclusion in conclusions:
            parts.extend(d.describe() for d in conclusion.derivations if d.rule_id)
        if not parts:
            return None
        return TraceStep(rule="COHERENCE", detail="; ".join(parts))

    @staticmethod
    def _distinct(pools: List[List[str]]) -> List[Tuple[str, ...]]:
        return [combo for combo in product(*pools) if len(set(combo)) == len(combo)]

    @staticmethod
    def _render(values: Mapping[str, FrozenSet[str]]) -> str:
        return ", ".join(f"{role}={'|'.join(sorted(v))}" for role, v in sorted(values.items()))

    @staticmethod
    def _winner(order: StrictPartialOrder, x: str, y: str) -> str:
        tags = order.support_of(y, x)
        return "+".join(sorted(t.value for t in tags)) if tags else "a stronger chain"


resolver_engine = ResolverEngine()
