"""
Brute-force oracles for property tests.

These deliberately avoid the graph library and the engine code paths:
orders are checked by enumerating pairs, permutations and subsets.
"""

from itertools import combinations, permutations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set

from app.config import Settings, settings as default_settings
from app.core.exceptions import CarrierTooLarge
from app.core.order import OVERRIDE_ORDER, Pair, PreferenceClass, StrictPartialOrder
from app.models.resolution import ClassConclusion


def _closure(carrier: Iterable[str], pairs: Iterable[Pair]) -> Set[Pair]:
    nodes = sorted(carrier)
    reach = set(pairs)
    for k in nodes:
        for i in nodes:
            for j in nodes:
                if (i, k) in reach and (k, j) in reach:
                    reach.add((i, j))
    return reach


def _contradicted(carrier: Iterable[str], pairs: Set[Pair]) -> Set[Pair]:
    """Pairs whose target reaches their source."""
    reach = _closure(carrier, pairs)
    return {(x, y) for x, y in pairs if x == y or (y, x) in reach}


def oracle_reverse(order: StrictPartialOrder, config: Optional[Settings] = None) -> StrictPartialOrder:
    limit = (config or default_settings).ORACLE_MAX_CARRIER
    if len(order.carrier) > limit:
        raise CarrierTooLarge(f"oracle_reverse handles at most {limit} elements, got {len(order.carrier)}")
    items = sorted(order.carrier)
    pairs = set()
    support = set()
    for x in items:
        for y in items:
            if (y, x) in order.pairs:
                pairs.add((x, y))
                for tag in PreferenceClass:
                    if (y, x, tag) in order.support:
                        support.add((x, y, tag))
    return StrictPartialOrder(carrier=order.carrier, pairs=frozenset(pairs), support=frozenset(support))


def oracle_combine(
    conclusions: Sequence[ClassConclusion],
    candidates: Iterable[str],
    config: Optional[Settings] = None,
) -> StrictPartialOrder:
    """
    Filter pairs through the override lattice, then intersect every linear
    ordering of the candidates that respects the surviving pairs.
    """
    candidates = frozenset(candidates)
    limit = (config or default_settings).ORACLE_MAX_CANDIDATES
    if len(candidates) > limit:
        raise CarrierTooLarge(f"oracle_combine handles at most {limit} candidates, got {len(candidates)}")

    edges: Set[Pair] = set()
    tags: Dict[Pair, Set[PreferenceClass]] = {}
    for cls in OVERRIDE_ORDER:
        proposed: Set[Pair] = set()
        for conclusion in conclusions:
            if conclusion.preference_class == cls:
                proposed |= set(conclusion.order.pairs)
        if not proposed:
            continue
        consistent = proposed - _contradicted(candidates, proposed)
        accepted = _closure(candidates, edges)
        kept = {(x, y) for x, y in consistent if (y, x) not in accepted}
        kept -= _contradicted(candidates, accepted | kept)
        edges |= kept
        for pair in kept:
            tags.setdefault(pair, set()).add(cls)

    pairs = _linear_intersection(candidates, edges)
    support = set()
    for (u, v), classes in tags.items():
        above = {u} | {a for a in candidates if (a, u) in pairs}
        below = {v} | {b for b in candidates if (v, b) in pairs}
        for a in above:
            for b in below:
                support.update((a, b, tag) for tag in classes)
    return StrictPartialOrder(carrier=candidates, pairs=frozenset(pairs), support=frozenset(support))


def _linear_intersection(candidates: FrozenSet[str], edges: Set[Pair]) -> Set[Pair]:
    common: Optional[Set[Pair]] = None
    for ordering in permutations(sorted(candidates)):
        position = {entity: i for i, entity in enumerate(ordering)}
        if any(position[x] > position[y] for x, y in edges):
            continue
        implied = {(ordering[i], ordering[j]) for i, j in combinations(range(len(ordering)), 2)}
        common = implied if common is None else common & implied
    return common or set()


def enumerate_orders(carrier: Iterable[str]) -> List[StrictPartialOrder]:
    """Every strict partial order on ``carrier``: 19 on three elements, 219 on four."""
    items = sorted(carrier)
    candidates = [(x, y) for x in items for y in items if x != y]
    orders = []
    for mask in range(1 << len(candidates)):
        pairs = {candidates[i] for i in range(len(candidates)) if mask >> i & 1}
        if any((y, x) in pairs for x, y in pairs):
            continue
        if any((x, z) not in pairs for x, y in pairs for w, z in pairs if w == y and x != z):
            continue
        orders.append(StrictPartialOrder(carrier=frozenset(items), pairs=frozenset(pairs)))
    return orders
