from app.engine.focus import check_asymmetry, focus_engine
from app.models.discourse import AccommodationKind, AccommodationRecord, Context
from app.models.entity import Entity, Sort
from app.models.resolution import DischargeStatus, Felicity, FocusScope
from app.models.rule import RuleBook
from app.models.utterance import Proposition


def variant_result(step, role="Subj"):
    return step.variants[0].result(role)


class TestResolveStressed:
    def test_hit_reverses_to_john(self, fixture_run):
        run = fixture_run("hit.disc")
        step = run.steps[1]
        he = run.document.variants_of("U2")[0].lf.mention("Subj")
        result = focus_engine.resolve_stressed(he, step.before, run.rules, "Subj", step.utterance.lf)
        assert result.base.order.pairs == {("Bill", "John")}
        assert result.final_order == result.base.order.reverse()
        assert result.value == {"John"}
        assert result.discharge.status == DischargeStatus.CONTRAST_IN_CANDIDATES
        assert result.felicity == Felicity.OK
        assert "REVERSE" in [s.rule for s in result.trace]

    def test_base_matches_the_unstressed_counterpart(self, fixture_step):
        step = fixture_step("hit_mary.disc", "U2")
        unstressed = step.resolution.result("Subj")
        stressed = variant_result(step)
        assert stressed.candidates == unstressed.candidates == {"John", "Bill"}
        assert stressed.base.order == unstressed.base.order
        assert stressed.value == {"John"}

    def test_indeterminate_skips_discharge(self, fixture_step):
        result = variant_result(fixture_step("jack_bob.disc", "U2"))
        assert result.value == {"Jack", "Bob"}
        assert result.discharge is None
        assert result.felicity == Felicity.AMBIGUOUS
        assert any(s.rule == "DISCHARGE" and "skipped" in s.detail for s in result.trace)


class TestDischarge:
    def test_contrast_in_local(self, fixture_step):
        result = variant_result(fixture_step("jack_mary.disc", "U2"))
        outcome = result.discharge
        assert outcome.status == DischargeStatus.CONTRAST_IN_LOCAL
        assert outcome.contrasting_proposition == Proposition(
            predicate="from_louisiana", args=("Mary",)
        ).negated()
        assert [r.kind for r in outcome.accommodations] == [AccommodationKind.CONTRAST]
        assert outcome.alternatives == {"Jack", "Mary"}

    def test_accommodated_question(self, fixture_step):
        step = fixture_step("jack_physicist.disc", "U2")
        outcome = step.resolution.result("Subj").discharge
        assert outcome.status == DischargeStatus.ACCOMMODATED_QUESTION
        kinds = [r.kind for r in outcome.accommodations]
        assert kinds == [AccommodationKind.QUESTION, AccommodationKind.ENTITY_SET]
        assert outcome.alternatives == {"Jack", "acc-person-1"}

    def test_infelicitous_with_rivals(self, fixture_step):
        result = variant_result(fixture_step("babar_asymmetry.disc", "U3"))
        assert result.value == {"Baker"}
        assert result.discharge.status == DischargeStatus.INFELICITOUS
        assert result.felicity == Felicity.INFELICITOUS

    def test_bridging_assumption(self, fixture_step):
        step = fixture_step("republican_norep.disc", "U2")
        variant = step.variants[0]
        assert variant.discharge.status == DischargeStatus.CONTRAST_IN_CANDIDATES
        assert [r.kind for r in variant.accommodations] == [AccommodationKind.BRIDGING]
        assert variant.accommodations[0].rule.id == "BRIDGE-call_republican-insult"

    def test_joint_focus_is_one_constraint(self, fixture_step):
        variant = fixture_step("republican.disc", "U2").variants[0]
        assert variant.constraint.scope == FocusScope.UTTERANCE
        assert variant.constraint.focus_roles == ("Subj", "Obj")
        assert variant.result("Subj").value == {"Jim"}
        assert variant.result("Obj").value == {"Paul"}
        assert variant.result("Subj").discharge == variant.result("Obj").discharge == variant.discharge


class TestAccommodation:
    def record(self):
        return AccommodationRecord(
            kind=AccommodationKind.ENTITY_SET,
            entities=(Entity(id="acc-person-1", sort=Sort.PERSON, accommodated=True),),
        )

    def test_accommodate_is_idempotent(self):
        model = Context.initial().model
        once = focus_engine.accommodate(model, self.record())
        twice = focus_engine.accommodate(once, self.record())
        assert once == twice
        assert once.accommodated_entities()[0].id == "acc-person-1"

    def test_accommodated_entities_join_the_background(self):
        ctx = focus_engine.apply_accommodations(Context.initial(), [self.record()])
        assert ctx.attention.background == {"acc-person-1"}
        assert ctx.attention.local == ()
        assert "acc-person-1" in ctx.model.entities

    def test_background_survives_the_next_utterance(self, fixture_step):
        step = fixture_step("jack_physicist.disc", "U2")
        assert "acc-person-1" in step.after.attention.background
        assert step.after.attention.local_set == {"Jack"}


class TestResolveUtterance:
    def test_no_pronouns(self, fixture_step):
        step = fixture_step("home.disc", "U1")
        resolution = focus_engine.resolve_utterance(step.before, step.utterance, RuleBook())
        assert resolution.results == ()
        assert resolution.resolved == step.utterance

    def test_registers_resolved_mentions(self, fixture_step):
        step = fixture_step("republican.disc", "U2")
        lf = step.resolution.resolved.lf
        assert lf.mention("Subj").referent == "Paul"
        assert lf.mention("Obj").referent == "Jim"
        assert not step.resolution.resolved.incomplete

    def test_indeterminate_pronoun_is_left_out(self, fixture_step):
        step = fixture_step("jack_bob.disc", "U2")
        assert step.resolution.resolved.incomplete
        assert step.resolution.resolved.lf.args == ()


class TestAsymmetry:
    def test_consistent_pair(self, fixture_step):
        step = fixture_step("babar_asymmetry.disc", "U3")
        unstressed, stressed = step.resolution.result("Subj"), variant_result(step)
        assert check_asymmetry([(unstressed, stressed)])

    def test_stressed_ok_with_infelicitous_counterpart_is_violated(self, fixture_step):
        step = fixture_step("babar_asymmetry.disc", "U3")
        ok, infelicitous = step.resolution.result("Subj"), variant_result(step)
        assert not check_asymmetry([(infelicitous, ok)])

    def test_empty(self):
        assert check_asymmetry([])
