import pytest

from app.core.exceptions import DslSyntaxError, DuplicateRuleId
from app.engine.knowledge import knowledge_engine, unify
from app.engine.rule_parser import rule_parser
from app.models.discourse import AccommodationKind, AccommodationRecord, DiscourseModel
from app.models.rule import DerivationStatus, RuleBook, RuleKind
from app.models.utterance import Polarity, Proposition, PropositionPattern

HIT = "rule HIT: hit(X,Y) ~> hurt(Y).\nsynonym hurt injured.\n"


def fact(predicate, *args, polarity=Polarity.POS):
    return Proposition(predicate=predicate, args=args, polarity=polarity)


def model(*facts):
    return DiscourseModel(facts=frozenset(facts))


class TestRuleParser:
    def test_causal_rule(self):
        book = rule_parser.parse("rule HIT: hit(X,Y) ~> hurt(Y).")
        assert book.ids() == ["HIT"]
        rule = book.get("HIT")
        assert rule.kind == RuleKind.CAUSAL
        assert str(rule.antecedent) == "hit(X,Y)"
        assert str(rule.consequent) == "hurt(Y)"

    def test_bridging_rule(self):
        book = rule_parser.parse("rule REP [bridging]: call_republican(X,Y) ~> insult(X,Y).")
        assert book.get("REP").kind == RuleKind.BRIDGING

    def test_synonyms_name_the_canonical_first(self):
        book = rule_parser.parse(HIT)
        assert book.canonical("injured") == "hurt"
        assert book.synonym_groups() == {"hurt": ["injured"]}

    def test_chained_synonyms_share_one_canonical(self):
        book = rule_parser.parse("synonym hurt injured.\nsynonym harmed hurt.\n")
        assert book.canonical("injured") == book.canonical("hurt") == "harmed"
        assert book.synonym_groups() == {"harmed": ["hurt", "injured"]}

    def test_chained_synonyms_render_stably(self):
        book = rule_parser.parse("synonym b c.\nsynonym a b.\n")
        assert book.synonyms == {"b": "a", "c": "a"}
        text = rule_parser.render(book)
        assert text == "synonym a b c.\n"
        assert rule_parser.parse(text) == book

    def test_merge_joins_synonym_classes(self):
        first = rule_parser.parse("synonym hurt injured.")
        second = rule_parser.parse("synonym harmed hurt.")
        merged = first.merge(second)
        assert {merged.canonical(p) for p in ("hurt", "injured", "harmed")} == {"harmed"}

    def test_comments_and_blank_lines(self):
        book = rule_parser.parse("# causal knowledge\n\nrule HIT: hit(X,Y) ~> hurt(Y).  # hits hurt\n")
        assert book.ids() == ["HIT"]

    def test_unbound_variable_is_positioned(self):
        with pytest.raises(DslSyntaxError) as exc:
            rule_parser.parse("\nrule BAD: p(X) ~> q(Z).", source="bad.rules")
        assert exc.value.line == 2
        assert exc.value.column == 21
        assert str(exc.value).startswith("bad.rules:2:21:")

    def test_missing_period(self):
        with pytest.raises(DslSyntaxError) as exc:
            rule_parser.parse("rule HIT: hit(X,Y) ~> hurt(Y)")
        assert "end of input" in exc.value.detail

    def test_unknown_kind(self):
        with pytest.raises(DslSyntaxError):
            rule_parser.parse("rule R [magic]: p(X) ~> q(X).")

    def test_duplicate_id(self):
        with pytest.raises(DuplicateRuleId):
            rule_parser.parse("rule R: p(X) ~> q(X).\nrule R: q(X) ~> p(X).")

    def test_render_is_canonical(self):
        text = rule_parser.render(rule_parser.parse(HIT))
        assert text == "rule HIT: hit(X,Y) ~> hurt(Y).\nsynonym hurt injured.\n"
        assert rule_parser.parse(text) == rule_parser.parse(HIT)

    def test_load_file(self, rules_dir):
        book = rule_parser.load(rules_dir / "republican.rules")
        assert book.ids() == ["REP"]

    def test_load_all_merges(self, rules_dir):
        book = rule_parser.load_all([rules_dir / "hit.rules", rules_dir / "republican.rules"])
        assert book.ids() == ["HIT", "REP"]


class TestUnify:
    def test_binds_variables(self):
        assert unify(("X", "Y"), ("John", "Bill")) == {"X": "John", "Y": "Bill"}

    def test_conflicting_binding(self):
        assert unify(("X", "X"), ("John", "Bill")) is None

    def test_constants_must_match(self):
        assert unify(("john",), ("bill",)) is None


class TestDerive:
    def test_derived_via_rule(self):
        derivation = knowledge_engine.derive(model(fact("hit", "John", "Bill")), rule_parser.parse(HIT), fact("hurt", "Bill"))
        assert derivation.status == DerivationStatus.DERIVED
        assert derivation.rule_id == "HIT"
        assert derivation.premise == fact("hit", "John", "Bill")

    def test_no_matching_binding(self):
        derivation = knowledge_engine.derive(model(fact("hit", "John", "Bill")), rule_parser.parse(HIT), fact("hurt", "John"))
        assert derivation.status == DerivationStatus.UNDERIVABLE

    def test_asserted(self):
        derivation = knowledge_engine.derive(model(fact("p", "a")), RuleBook(), fact("p", "a"))
        assert derivation.status == DerivationStatus.ASSERTED

    def test_synonym_goal(self):
        derivation = knowledge_engine.derive(
            model(fact("hit", "John", "Bill")), rule_parser.parse(HIT), fact("injured", "Bill")
        )
        assert derivation.succeeded

    def test_synonym_declared_through_a_chain(self):
        book = rule_parser.parse("synonym hurt injured.\nsynonym harmed hurt.\nrule HIT: hit(X,Y) ~> harmed(Y).\n")
        derivation = knowledge_engine.derive(model(fact("hit", "John", "Bill")), book, fact("injured", "Bill"))
        assert derivation.status == DerivationStatus.DERIVED
        assert derivation.rule_id == "HIT"

    def test_model_facts_are_not_accommodated(self):
        derivation = knowledge_engine.derive(model(fact("hit", "John", "Bill")), rule_parser.parse(HIT), fact("hurt", "Bill"))
        assert not derivation.accommodated

    def test_accommodated_contrast_is_kept_apart(self):
        contrast = fact("from_louisiana", "Jack")
        record = AccommodationRecord(kind=AccommodationKind.CONTRAST, proposition=contrast)
        accommodated = model().model_copy(update={"accommodated": (record,)})
        derivation = knowledge_engine.derive(accommodated, RuleBook(), contrast)
        assert derivation.status == DerivationStatus.ASSERTED
        assert derivation.accommodated

    def test_negative_goal_is_never_derived_by_rules(self):
        derivation = knowledge_engine.derive(
            model(fact("hit", "John", "Bill")), rule_parser.parse(HIT), fact("hurt", "Bill", polarity=Polarity.NEG)
        )
        assert derivation.status == DerivationStatus.UNDERIVABLE

    def test_derive_either_finds_negation(self):
        negated = fact("from_louisiana", "Mary", polarity=Polarity.NEG)
        derivation = knowledge_engine.derive_either(model(negated), RuleBook(), fact("from_louisiana", "Mary"))
        assert derivation.goal == negated
        assert derivation.status == DerivationStatus.ASSERTED

    def test_accommodated_bridging_rule(self):
        book = rule_parser.parse("rule REP [bridging]: call_republican(X,Y) ~> insult(X,Y).")
        record = AccommodationRecord(kind=AccommodationKind.BRIDGING, rule=book.get("REP"))
        accommodated = model(fact("call_republican", "Paul", "Jim")).model_copy(update={"accommodated": (record,)})
        derivation = knowledge_engine.derive(accommodated, RuleBook(), fact("insult", "Paul", "Jim"))
        assert derivation.rule_id == "REP"


class TestWkPreference:
    def test_hit_prefers_the_victim(self):
        pattern = PropositionPattern(predicate="injured", slots=(None,), roles=("Subj",))
        order = knowledge_engine.wk_preference(
            {"John", "Bill"}, pattern, model(fact("hit", "John", "Bill")), rule_parser.parse(HIT)
        )
        assert order.pairs == {("Bill", "John")}

    def test_no_rules_no_preference(self):
        pattern = PropositionPattern(predicate="insult", slots=(None, None), roles=("Subj", "Obj"))
        order = knowledge_engine.wk_preference(
            {"Paul", "Jim"}, pattern, model(fact("call_republican", "Paul", "Jim")), RuleBook(), 0, {1: {"Paul", "Jim"}}
        )
        assert order.pairs == frozenset()

    def test_indistinguishable_candidates(self):
        pattern = PropositionPattern(predicate="from_louisiana", slots=(None,), roles=("Subj",))
        conclusion = knowledge_engine.wk_conclusion({"Jack", "Bob"}, pattern, model(), RuleBook())
        assert conclusion.order.pairs == frozenset()
        assert conclusion.derivations == ()

    def test_co_candidates_fill_other_holes(self):
        pattern = PropositionPattern(predicate="insult", slots=(None, None), roles=("Subj", "Obj"))
        book = rule_parser.parse("rule REP: call_republican(X,Y) ~> insult(X,Y).")
        conclusion = knowledge_engine.wk_conclusion(
            {"Paul", "Jim"}, pattern, model(fact("call_republican", "Paul", "Jim")), book, 0, {1: {"Paul", "Jim"}}
        )
        assert conclusion.order.pairs == {("Paul", "Jim")}
        assert conclusion.derivations[0].goal == fact("insult", "Paul", "Jim")
