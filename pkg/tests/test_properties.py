"""Randomised properties, ``settings.PROPERTY_CASES`` seeded cases per suite."""

import random

from app.config import settings
from app.core.order import PreferenceClass, StrictPartialOrder
from app.engine.attention import attention_engine
from app.engine.resolver import resolver_engine
from app.harness.document import document_parser
from app.harness.generators import generate_discourse, random_conclusions, random_order
from app.harness.oracles import oracle_combine, oracle_reverse
from app.harness.runner import discourse_runner
from app.models.discourse import CenterRecord
from app.models.mention import GrammaticalFunction, Mention, MentionKind
from app.models.utterance import LogicalForm

LABELS = "abcde"
CASES = settings.PROPERTY_CASES

ROLES = [
    ("Subj", GrammaticalFunction.SUBJECT),
    ("Obj", GrammaticalFunction.OBJECT),
    ("Obj2", GrammaticalFunction.OBJECT2),
    ("At", GrammaticalFunction.OTHER),
]


def random_carrier(rng, low=0, high=5):
    return LABELS[: rng.randint(low, high)]


def tagged_order(rng, carrier):
    return random_order(rng, carrier, rng.random(), rng.choice([None, *PreferenceClass]))


class TestOrderProperties:
    def test_reverse_is_an_involution(self):
        rng = random.Random(101)
        for _ in range(CASES):
            order = tagged_order(rng, random_carrier(rng))
            assert order.reverse().reverse() == order

    def test_reverse_preserves_incomparability(self):
        rng = random.Random(102)
        for _ in range(CASES):
            carrier = random_carrier(rng, 2)
            order = tagged_order(rng, carrier)
            reversed_order = order.reverse()
            for x in carrier:
                for y in carrier:
                    assert order.incomparable(x, y) == reversed_order.incomparable(x, y)

    def test_singleton_is_a_fixpoint(self):
        rng = random.Random(103)
        for _ in range(CASES):
            order = tagged_order(rng, rng.choice(LABELS))
            assert order.reverse() == order

    def test_restrict_commutes_with_reverse(self):
        rng = random.Random(104)
        for _ in range(CASES):
            carrier = random_carrier(rng)
            order = tagged_order(rng, carrier)
            subset = [x for x in carrier if rng.random() < 0.5]
            assert order.restrict(subset).reverse() == order.reverse().restrict(subset)

    def test_closure_is_idempotent(self):
        rng = random.Random(105)
        for _ in range(CASES):
            order = tagged_order(rng, random_carrier(rng))
            if rng.random() < 0.5:
                order = order.reverse()
            assert StrictPartialOrder.from_pairs(order.carrier, order.pairs, order.support_map()) == order


class TestSalienceProperties:
    def test_total_unless_center_competes_with_subject(self):
        rng = random.Random(301)
        for _ in range(CASES):
            chosen = [role for role in ROLES if rng.random() < 0.7] or [rng.choice(ROLES)]
            lf = LogicalForm(
                predicate="p",
                args=tuple(
                    (role, Mention(surface=label, kind=MentionKind.DEFINITE, gf=gf, referent=label))
                    for (role, gf), label in zip(chosen, LABELS)
                ),
            )
            realized = lf.realized()
            entity = rng.choice([None, "z", *realized])
            center = None
            if entity is not None:
                gf = lf.gf_of(entity) or GrammaticalFunction.OBJECT
                center = CenterRecord(entity=entity, realized_gf=gf)

            salience = attention_engine.project_salience(lf, center)

            assert salience.carrier == set(realized)
            competing = (
                entity in realized
                and lf.gf_of(entity) != GrammaticalFunction.SUBJECT
                and any(gf == GrammaticalFunction.SUBJECT for _, gf in chosen)
            )
            assert salience.is_total() != competing


class TestOracleEquivalence:
    def test_oracle_reverse(self):
        rng = random.Random(201)
        for _ in range(CASES):
            order = tagged_order(rng, random_carrier(rng, 0, settings.ORACLE_MAX_CARRIER))
            assert oracle_reverse(order) == order.reverse()

    def test_oracle_combine(self):
        rng = random.Random(202)
        for _ in range(CASES):
            candidates = random_carrier(rng, 1, settings.ORACLE_MAX_CANDIDATES)
            conclusions = random_conclusions(rng, candidates)
            combined = resolver_engine.combine(conclusions, candidates)
            assert combined.order == oracle_combine(conclusions, candidates)

    def test_combine_never_invents_pairs(self):
        rng = random.Random(203)
        for _ in range(CASES):
            candidates = random_carrier(rng, 1, 4)
            conclusions = random_conclusions(rng, candidates)
            combined = resolver_engine.combine(conclusions, candidates).order
            for x, y in combined.pairs:
                assert combined.support_of(x, y)


class TestDiscourseProperties:
    def test_stressed_pipeline(self):
        rng = random.Random(301)
        checked = 0
        for i in range(CASES):
            run = discourse_runner.execute(generate_discourse(rng, title=f"case {i}"))
            for unstressed, stressed in discourse_runner.counterpart_pairs(run):
                checked += 1
                # Same candidates and base order; the stressed final order reverses it.
                assert stressed.candidates == unstressed.candidates
                assert stressed.base.order == unstressed.base.order
                assert stressed.final_order == unstressed.base.order.reverse()
                if not unstressed.base.order.pairs:
                    assert stressed.final_order.maximal() == unstressed.candidates
                if len(unstressed.candidates) == 1:
                    assert stressed.value == unstressed.value
        assert checked > 0

    def test_candidates_are_local_and_agree(self):
        rng = random.Random(302)
        for i in range(CASES):
            run = discourse_runner.execute(generate_discourse(rng, title=f"case {i}"))
            for step in run.steps:
                local = step.before.attention.local_set
                for resolution in (step.resolution, *step.variants):
                    for result in resolution.results:
                        assert result.value <= result.candidates <= local
                        assert result.final_order.carrier == result.candidates
                        for entity_id in result.candidates:
                            entity = step.before.model.entity(entity_id)
                            assert resolver_engine.agrees(result.pronoun, entity)
                            assert not entity.accommodated

    def test_generated_documents_survive_rendering(self):
        rng = random.Random(303)
        for i in range(CASES):
            document = generate_discourse(rng, title=f"case {i}")
            assert document_parser.parse(document_parser.render(document)) == document
