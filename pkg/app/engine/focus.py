"""
Stressed-pronoun resolution.

A stressed pronoun takes the complementary preference of its unstressed
counterpart: the base order is computed exactly as for the unstressed
pronoun over the same candidates, then every pair is reversed. The focus
constraint the stress presupposes must then be discharged against the
context, through a derivable contrast, a contrasting individual in the
local state, or an accommodated question.
"""

from itertools import product
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from app.config import Settings, settings as default_settings
from app.core.exceptions import DiscourseError, UnresolvedMention
from app.core.order import StrictPartialOrder, render_set
from app.engine.attention import AttentionEngine, attention_engine
from app.engine.knowledge import KnowledgeEngine, knowledge_engine
from app.engine.resolver import ResolverEngine, resolver_engine
from app.models.discourse import (
    AccommodationKind,
    AccommodationRecord,
    Context,
    DiscourseModel,
)
from app.models.entity import Entity, Gender, Sort
from app.models.mention import Mention
from app.models.resolution import (
    BasePreference,
    ClassConclusion,
    DischargeOutcome,
    DischargeStatus,
    Felicity,
    FocusConstraint,
    FocusScope,
    ResolutionError,
    ResolutionResult,
    TraceStep,
    UtteranceResolution,
)
from app.models.rule import Atom, DefeasibleRule, RuleBook, RuleKind
from app.models.utterance import LogicalForm, Proposition, PropositionPattern, Utterance
from app.utilities.logger import AppLogger

logger = AppLogger.get_logger("focus")

Candidates = Union[Iterable[str], Mapping[str, Iterable[str]]]


def check_asymmetry(pairs: Iterable[Tuple[ResolutionResult, ResolutionResult]]) -> bool:
    """
    True unless some position has a felicitous stressed pronoun whose
    unstressed counterpart is infelicitous.

    Each pair is (unstressed, stressed) at the same position.
    """
    return all(
        not (stressed.felicity == Felicity.OK and unstressed.felicity == Felicity.INFELICITOUS)
        for unstressed, stressed in pairs
    )


class FocusEngine:
    def __init__(
        self,
        config: Optional[Settings] = None,
        resolver: Optional[ResolverEngine] = None,
        attention: Optional[AttentionEngine] = None,
        knowledge: Optional[KnowledgeEngine] = None,
    ):
        self.settings = config or default_settings
        self.resolver = resolver or resolver_engine
        self.attention = attention or attention_engine
        self.knowledge = knowledge or knowledge_engine

    def resolve_stressed(
        self,
        pronoun: Mention,
        ctx: Context,
        rules: RuleBook,
        role: Optional[str] = None,
        clause: Optional[LogicalForm] = None,
        relation: Optional[str] = None,
    ) -> ResolutionResult:
        """
        Locate the local state, compute the unstressed counterpart's base
        preference, reverse it, discharge the focus constraint and record
        coherence.
        """
        role = role or pronoun.gf.value
        conclusions, base, trace = self._base(role, pronoun, ctx, rules, clause)
        final, reversal = self._complement(base)
        trace.append(reversal)
        value = final.maximal()

        outcome = None
        if len(value) == 1:
            pattern = self._pattern(clause, [role])
            constraint = FocusConstraint(
                scope=FocusScope.PHRASE,
                pattern=pattern,
                alternatives=base.candidates,
                focus_roles=(role,),
            )
            outcome = self.discharge(constraint, next(iter(value)), base.candidates, ctx, rules)
            trace.append(self._discharge_step(outcome))
        else:
            trace.append(TraceStep(rule="DISCHARGE", detail="skipped: value indeterminate"))

        return self._result(role, pronoun, conclusions, base, final, value, outcome, trace, relation)

    def discharge(
        self,
        constraint: FocusConstraint,
        chosen: Union[str, Sequence[str]],
        candidates: Candidates,
        ctx: Context,
        rules: RuleBook,
    ) -> DischargeOutcome:
        """
        Discharge ``constraint`` for the chosen value(s), trying a derivable
        contrast among the candidates, a bridging assumption, a contrasting
        individual in the local state and an accommodated question in turn.
        """
        roles = constraint.focus_roles or tuple(
            constraint.pattern.roles[i] for i in constraint.pattern.holes
        )
        chosen = (chosen,) if isinstance(chosen, str) else tuple(chosen)
        if isinstance(candidates, Mapping):
            pools = {role: frozenset(candidates[role]) for role in roles}
        else:
            pools = {roles[0]: frozenset(candidates)}
        pattern = constraint.pattern
        model = ctx.model
        local = sorted(ctx.attention.local)

        # Contrast among the candidates, supported by the model and rules.
        alternatives = [
            alt
            for alt in product(*(sorted(pools[role]) for role in roles))
            if alt != chosen and len(set(alt)) == len(alt)
        ]
        for alt in alternatives:
            for proposition in self._instances(pattern, roles, alt, local):
                derivation = self.knowledge.derive_either(model, rules, proposition)
                if derivation.succeeded:
                    return DischargeOutcome(
                        status=DischargeStatus.CONTRAST_IN_CANDIDATES,
                        contrasting_proposition=derivation.goal,
                        support=derivation,
                        alternatives=frozenset(chosen) | frozenset(alt),
                    )

        # Bridging assumption from the LF register to an alternative.
        bridged = self._bridge(pattern, roles, chosen, alternatives, ctx, rules)
        if bridged is not None:
            return bridged

        # A contrasting individual of the same sort elsewhere in A^LOC.
        for index, role in enumerate(roles):
            sort = model.entity(chosen[index]).sort
            for other in local:
                if other in pools[role] or other in chosen or model.entity(other).sort != sort:
                    continue
                alt = chosen[:index] + (other,) + chosen[index + 1 :]
                instances = self._instances(pattern, roles, alt, local)
                if not instances:
                    continue
                contrast = instances[0].negated()
                record = AccommodationRecord(kind=AccommodationKind.CONTRAST, proposition=contrast)
                return DischargeOutcome(
                    status=DischargeStatus.CONTRAST_IN_LOCAL,
                    contrasting_proposition=contrast,
                    accommodations=(record,),
                    alternatives=frozenset(chosen) | {other},
                )

        # No same-sort individual in A^LOC: accommodate a question and its askees.
        for index, role in enumerate(roles):
            sort = model.entity(chosen[index]).sort
            rivals = [e for e in local if e not in chosen and model.entity(e).sort == sort]
            if rivals:
                continue
            entities = self._anonymous(model, sort)
            records = (
                AccommodationRecord(kind=AccommodationKind.QUESTION, question=pattern),
                AccommodationRecord(kind=AccommodationKind.ENTITY_SET, entities=entities),
            )
            return DischargeOutcome(
                status=DischargeStatus.ACCOMMODATED_QUESTION,
                accommodations=records,
                alternatives=frozenset(chosen) | {e.id for e in entities},
            )

        return DischargeOutcome(
            status=DischargeStatus.INFELICITOUS, alternatives=frozenset(chosen)
        )

    def accommodate(self, model: DiscourseModel, record: AccommodationRecord) -> DiscourseModel:
        if record in model.accommodated:
            return model
        updated = model.model_copy(update={"accommodated": model.accommodated + (record,)})
        if record.entities:
            updated = updated.with_entities(record.entities)
        return updated

    def apply_accommodations(self, ctx: Context, records: Iterable[AccommodationRecord]) -> Context:
        """Fold records into D; accommodated entities join the background of A."""
        model = ctx.model
        entity_ids: List[str] = []
        for record in records:
            model = self.accommodate(model, record)
            entity_ids.extend(e.id for e in record.entities)
        ctx = ctx.model_copy(update={"model": model})
        return self.attention.admit_background(ctx, entity_ids)

    def resolve_utterance(self, ctx: Context, utterance: Utterance, rules: RuleBook) -> UtteranceResolution:
        """
        Resolve every pronoun of ``utterance`` against the input context.

        Co-argument pronouns are assigned jointly with distinct values. When
        any pronoun is stressed a single focus constraint is discharged for
        the utterance once the values are known.
        """
        lf = utterance.lf
        pending = [(role, m) for role, m in lf.pronouns() if not m.resolved]
        if not pending:
            return UtteranceResolution(label=utterance.label, resolved=utterance)

        errors: List[ResolutionError] = []
        staged: Dict[str, Tuple[Mention, Tuple[ClassConclusion, ...], BasePreference, StrictPartialOrder, List[TraceStep]]] = {}
        for role, pronoun in pending:
            try:
                conclusions, base, trace = self._base(role, pronoun, ctx, rules, lf)
            except DiscourseError as exc:
                logger.warning(f"{utterance.label}.{role}: {type(exc).__name__}: {exc.detail}")
                errors.append(
                    ResolutionError(role=role, surface=pronoun.surface, error=type(exc).__name__, detail=exc.detail)
                )
                continue
            final = base.order
            if pronoun.stressed:
                final, reversal = self._complement(base)
                trace.append(reversal)
            staged[role] = (pronoun, conclusions, base, final, trace)

        utterance_trace: List[TraceStep] = []
        if len(staged) > 1:
            values, joint = self.resolver.assign_jointly({r: s[3] for r, s in staged.items()})
            utterance_trace.extend(joint)
        else:
            values = {r: s[3].maximal() for r, s in staged.items()}

        registered = lf
        dropped = [role for role, _ in pending if role not in values or len(values[role]) != 1]
        for role, value in values.items():
            if len(value) == 1:
                registered = registered.with_mention(role, registered.mention(role).resolve_to(next(iter(value))))
        registered = registered.without(dropped)

        stressed = [role for role, _ in pending if role in staged and staged[role][0].stressed]
        constraint, outcome = None, None
        if stressed and all(len(values[r]) == 1 for r in stressed):
            content = lf
            for role, value in values.items():
                if role not in stressed and len(value) == 1:
                    content = content.with_mention(role, content.mention(role).resolve_to(next(iter(value))))
            constraint = FocusConstraint(
                scope=FocusScope.PHRASE if len(stressed) == 1 else FocusScope.UTTERANCE,
                pattern=self._pattern(content, stressed),
                alternatives=frozenset().union(*(staged[r][2].candidates for r in stressed)),
                focus_roles=tuple(stressed),
            )
            chosen = tuple(next(iter(values[r])) for r in stressed)
            outcome = self.discharge(
                constraint, chosen, {r: staged[r][2].candidates for r in stressed}, ctx, rules
            )
            utterance_trace.append(self._discharge_step(outcome))
        elif stressed:
            utterance_trace.append(TraceStep(rule="DISCHARGE", detail="skipped: value indeterminate"))

        results = []
        for role, (pronoun, conclusions, base, final, trace) in staged.items():
            steps = trace + [s for s in utterance_trace if s.rule == "JOINT"]
            discharge = None
            if pronoun.stressed:
                discharge = outcome
                steps += [s for s in utterance_trace if s.rule == "DISCHARGE"]
            results.append(
                self._result(
                    role, pronoun, conclusions, base, final, values[role], discharge, steps, utterance.relation
                )
            )
        for role in dropped:
            if role in values:
                utterance_trace.append(
                    TraceStep(rule="REGISTER", detail=f"{role} left out of the LF register (value {render_set(values[role])})")
                )

        resolved = utterance.with_lf(registered)
        if dropped:
            resolved = resolved.model_copy(update={"incomplete": True})
        return UtteranceResolution(
            label=utterance.label,
            results=tuple(results),
            errors=tuple(errors),
            resolved=resolved,
            constraint=constraint,
            discharge=outcome,
            accommodations=outcome.accommodations if outcome else (),
            trace=tuple(utterance_trace),
        )

    def _base(
        self,
        role: str,
        pronoun: Mention,
        ctx: Context,
        rules: RuleBook,
        clause: Optional[LogicalForm],
    ):
        counterpart = pronoun.counterpart() if pronoun.stressed else pronoun
        return self.resolver.base_preference(role, counterpart, ctx, rules, clause)

    @staticmethod
    def _complement(base: BasePreference) -> Tuple[StrictPartialOrder, TraceStep]:
        final = base.order.reverse()
        before = ", ".join(base.order.render("≺")) or render_set(base.candidates)
        after = ", ".join(final.render("≺")) or render_set(base.candidates)
        logger.debug(f"Reversed {before} to {after}")
        return final, TraceStep(rule="REVERSE", detail=f"{before} ↝ {after}")

    @staticmethod
    def _pattern(clause: Optional[LogicalForm], roles: Sequence[str]) -> PropositionPattern:
        if clause is None:
            return PropositionPattern(predicate="_", slots=(None,) * len(roles), roles=tuple(roles))
        return clause.focus_pattern(roles)

    @staticmethod
    def _instances(
        pattern: PropositionPattern,
        roles: Sequence[str],
        values: Sequence[str],
        local: Sequence[str],
    ) -> List[Proposition]:
        """Instantiations with ``values`` at the focus roles; other holes range over ``local``."""
        filled = pattern
        for role, value in zip(roles, values):
            filled = filled.fill(filled.slot_of(role), value)
        free = filled.holes
        if not free:
            return [filled.instantiate(())]
        pool = [e for e in local if e not in values]
        return [
            filled.instantiate(combo)
            for combo in product(pool, repeat=len(free))
            if len(set(combo)) == len(combo)
        ]

    def _bridge(
        self,
        pattern: PropositionPattern,
        roles: Sequence[str],
        chosen: Tuple[str, ...],
        alternatives: Sequence[Tuple[str, ...]],
        ctx: Context,
        rules: RuleBook,
    ) -> Optional[DischargeOutcome]:
        register = ctx.lf_register
        if register is None or not register.core_args():
            return None
        if set(pattern.holes) != {pattern.slot_of(r) for r in roles}:
            return None
        try:
            previous = register.proposition()
        except UnresolvedMention:
            return None
        if rules.canonical(previous.predicate) == rules.canonical(pattern.predicate):
            return None
        for alt in alternatives:
            proposition = self._instances(pattern, roles, alt, ())[0]
            if proposition.args != previous.args or proposition.polarity != previous.polarity:
                continue
            variables = tuple(f"X{i + 1}" for i in range(len(previous.args)))
            rule = DefeasibleRule(
                id=f"BRIDGE-{previous.predicate}-{proposition.predicate}",
                antecedent=Atom(predicate=previous.predicate, terms=variables),
                consequent=Atom(predicate=proposition.predicate, terms=variables),
                kind=RuleKind.BRIDGING,
            )
            record = AccommodationRecord(kind=AccommodationKind.BRIDGING, rule=rule)
            derivation = self.knowledge.derive(self.accommodate(ctx.model, record), rules, proposition)
            if not derivation.succeeded:
                continue
            return DischargeOutcome(
                status=DischargeStatus.CONTRAST_IN_CANDIDATES,
                contrasting_proposition=proposition,
                accommodations=(record,),
                support=derivation,
                alternatives=frozenset(alt) | frozenset(chosen),
            )
        return None

    def _anonymous(self, model: DiscourseModel, sort: Sort) -> Tuple[Entity, ...]:
        taken = set(model.entities)
        entities = []
        n = 0
        while len(entities) < self.settings.ACCOMMODATED_PERSON_COUNT:
            n += 1
            entity_id = f"acc-{sort.value.lower()}-{n}"
            if entity_id in taken:
                continue
            entities.append(
                Entity(id=entity_id, name="someone", sort=sort, gender=Gender.UNKNOWN, accommodated=True)
            )
        return tuple(entities)

    @staticmethod
    def _discharge_step(outcome: DischargeOutcome) -> TraceStep:
        parts = [outcome.status.value]
        if outcome.contrasting_proposition is not None:
            parts.append(f"contrast {outcome.contrasting_proposition}")
        if outcome.support is not None and outcome.support.rule_id:
            parts.append(f"via {outcome.support.rule_id}")
        parts.extend(f"accommodate {r.describe()}" for r in outcome.accommodations)
        logger.debug(f"Discharge: {'; '.join(parts)}")
        return TraceStep(rule="DISCHARGE", detail="; ".join(parts))

    def _result(
        self,
        role: str,
        pronoun: Mention,
        conclusions: Tuple[ClassConclusion, ...],
        base: BasePreference,
        final: StrictPartialOrder,
        value: FrozenSet[str],
        outcome: Optional[DischargeOutcome],
        trace: List[TraceStep],
        relation: Optional[str],
    ) -> ResolutionResult:
        if pronoun.stressed:
            if len(value) > 1:
                felicity = Felicity.AMBIGUOUS
            elif outcome is not None and not outcome.felicitous:
                felicity = Felicity.INFELICITOUS
            else:
                felicity = Felicity.OK
        else:
            felicity = self.resolver.felicity(value, base)

        steps = list(trace)
        coherence = self.resolver.coherence_step(relation, conclusions)
        if coherence is not None:
            steps.append(coherence)
        result = ResolutionResult(
            role=role,
            pronoun=pronoun,
            candidates=base.candidates,
            conclusions=conclusions,
            base=base,
            final_order=final,
            value=value,
            discharge=outcome if pronoun.stressed else None,
            felicity=felicity,
            trace=tuple(steps),
        )
        logger.info(f"{result.target} := {render_set(value)} ({felicity.value})")
        return result


focus_engine = FocusEngine()
