import pytest

from app.core.exceptions import CycleError, EmptyCarrier, NotASubset, UnknownEntity
from app.core.order import PreferenceClass, StrictPartialOrder, render_set


def order(carrier, pairs=(), support=None):
    return StrictPartialOrder.from_pairs(carrier, pairs, support)


class TestAddPair:
    def test_single_edge(self):
        result = StrictPartialOrder.empty({"a", "b"}).add_pair("a", "b")
        assert result.pairs == {("a", "b")}

    def test_transitive_closure(self):
        result = order({"a", "b", "c"}, [("a", "b")]).add_pair("b", "c")
        assert result.pairs == {("a", "b"), ("b", "c"), ("a", "c")}

    def test_antisymmetry_violation(self):
        with pytest.raises(CycleError):
            order({"a", "b"}, [("a", "b")]).add_pair("b", "a")

    def test_unknown_entity(self):
        with pytest.raises(UnknownEntity):
            StrictPartialOrder.empty({"a"}).add_pair("a", "z")

    def test_support_is_kept(self):
        result = StrictPartialOrder.empty({"a", "b"}).add_pair("a", "b", {PreferenceClass.WK})
        assert result.support_of("a", "b") == {PreferenceClass.WK}


class TestFromPairs:
    def test_cycle_is_reported(self):
        with pytest.raises(CycleError) as exc:
            order({"a", "b", "c"}, [("a", "b"), ("b", "c"), ("c", "a")])
        assert "cycle" in exc.value.detail

    def test_reflexive_pair(self):
        with pytest.raises(CycleError):
            order({"a"}, [("a", "a")])

    def test_support_spreads_over_induced_pairs(self):
        result = order(
            {"a", "b", "c"},
            [("a", "b"), ("b", "c")],
            {("a", "b"): {PreferenceClass.ATT}, ("b", "c"): {PreferenceClass.LF}},
        )
        assert result.support_of("a", "c") == {PreferenceClass.ATT, PreferenceClass.LF}
        assert result.support_of("a", "b") == {PreferenceClass.ATT}

    def test_validator_rejects_open_pairs(self):
        with pytest.raises(ValueError):
            StrictPartialOrder(carrier=frozenset({"a", "b", "c"}), pairs=frozenset({("a", "b"), ("b", "c")}))


class TestReverse:
    def test_flips_pairs(self):
        assert order({"Bill", "John"}, [("Bill", "John")]).reverse().pairs == {("John", "Bill")}

    def test_singleton_is_fixpoint(self):
        single = StrictPartialOrder.empty({"Jack"})
        assert single.reverse() == single

    def test_involution(self):
        original = order({"a", "b", "c", "d"}, [("a", "b"), ("c", "d")], {("a", "b"): {PreferenceClass.WK}})
        assert original.reverse().reverse() == original

    def test_incomparable_stays_incomparable(self):
        original = order({"a", "b", "c"}, [("a", "b")])
        assert original.reverse().incomparable("a", "c")


class TestMaximal:
    def test_top_of_chain(self):
        assert order({"John", "Bill"}, [("John", "Bill")]).maximal() == {"John"}

    def test_indeterminate(self):
        assert StrictPartialOrder.empty({"Jack", "Bob"}).maximal() == {"Jack", "Bob"}

    def test_single_top(self):
        assert order({"a", "b", "c"}, [("a", "b"), ("a", "c")]).maximal() == {"a"}

    def test_empty_carrier(self):
        with pytest.raises(EmptyCarrier):
            StrictPartialOrder.empty().maximal()


class TestRestrict:
    def test_drops_outside_pairs(self):
        chain = order({"John", "Bill", "Mary"}, [("John", "Bill"), ("Bill", "Mary")])
        assert chain.restrict({"John", "Bill"}).pairs == {("John", "Bill")}

    def test_full_carrier_is_identity(self):
        chain = order({"a", "b"}, [("a", "b")])
        assert chain.restrict({"a", "b"}) == chain

    def test_empty_subset(self):
        assert order({"a", "b"}, [("a", "b")]).restrict(set()) == StrictPartialOrder.empty()

    def test_not_a_subset(self):
        with pytest.raises(NotASubset):
            StrictPartialOrder.empty({"a"}).restrict({"a", "b"})


class TestRendering:
    def test_render_is_sorted(self):
        assert order({"b", "a", "c"}, [("b", "c"), ("a", "c")]).render() == ["a>c", "b>c"]

    def test_render_set(self):
        assert render_set({"Jack", "Bob"}) == "{Bob, Jack}"

    def test_is_total(self):
        assert order({"a", "b"}, [("a", "b")]).is_total()
        assert not StrictPartialOrder.empty({"a", "b"}).is_total()
