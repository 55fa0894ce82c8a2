"""Strict partial orders over entity identifiers.

Salience (``>``) and preference (``≺``) are both stored as transitively
closed sets of ordered pairs ``(x, y)`` meaning *x outranks y*. Preference
orders additionally carry, per pair, the set of preference classes that
support it.
"""

import enum
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

import networkx as nx
from pydantic import model_validator

from app.core.exceptions import CycleError, EmptyCarrier, NotASubset, UnknownEntity
from app.schemas.base import FrozenSchema

Pair = Tuple[str, str]


class PreferenceClass(enum.Enum):
    WK = "WK"
    ATT = "ATT"
    LF = "LF"

    @property
    def strength(self) -> int:
        """Position in the override lattice; a higher class can override a lower one."""
        return {"WK": 3, "ATT": 2, "LF": 1}[self.value]


# Highest class first.
OVERRIDE_ORDER = (PreferenceClass.WK, PreferenceClass.ATT, PreferenceClass.LF)


class StrictPartialOrder(FrozenSchema):
    carrier: FrozenSet[str] = frozenset()
    pairs: FrozenSet[Tuple[str, str]] = frozenset()
    support: FrozenSet[Tuple[str, str, PreferenceClass]] = frozenset()

    @model_validator(mode="after")
    def check_strict(self):
        successors: Dict[str, set] = {}
        for x, y in self.pairs:
            if x == y:
                raise ValueError(f"reflexive pair ({x}, {y})")
            if x not in self.carrier or y not in self.carrier:
                raise ValueError(f"pair ({x}, {y}) leaves the carrier")
            successors.setdefault(x, set()).add(y)
        for x, y in self.pairs:
            for z in successors.get(y, ()):
                if (x, z) not in self.pairs:
                    raise ValueError(f"not transitively closed: ({x}, {y}), ({y}, {z})")
        for x, y, _ in self.support:
            if (x, y) not in self.pairs:
                raise ValueError(f"support tag on missing pair ({x}, {y})")
        return self

    @classmethod
    def empty(cls, carrier: Iterable[str] = ()) -> "StrictPartialOrder":
        return cls(carrier=frozenset(carrier))

    @classmethod
    def from_pairs(
        cls,
        carrier: Iterable[str],
        pairs: Iterable[Pair],
        support: Optional[Mapping[Pair, Iterable[PreferenceClass]]] = None,
    ) -> "StrictPartialOrder":
        """
        Build the transitive closure of ``pairs``.

        Each edge's support is unioned into every pair the edge induces, so a
        pair reached through a chain carries the tags of every link.

        Raises:
            UnknownEntity: a pair mentions an id outside the carrier.
            CycleError: the pairs contain a cycle.
        """
        carrier = frozenset(carrier)
        support = support or {}
        edges: Dict[Pair, FrozenSet[PreferenceClass]] = {}
        for x, y in pairs:
            if x == y:
                raise CycleError(f"{x} cannot outrank itself")
            missing = {x, y} - carrier
            if missing:
                raise UnknownEntity(f"Unknown entities {sorted(missing)} in pair ({x}, {y})")
            edges[(x, y)] = frozenset(support.get((x, y), ()))

        graph = nx.DiGraph()
        graph.add_nodes_from(carrier)
        graph.add_edges_from(edges)
        if not nx.is_directed_acyclic_graph(graph):
            cycle = nx.find_cycle(graph)
            path = " > ".join([u for u, _ in cycle] + [cycle[0][0]])
            raise CycleError(f"Pairs form a cycle: {path}")

        closure = nx.transitive_closure_dag(graph)
        tags = set()
        for (u, v), classes in edges.items():
            if not classes:
                continue
            above = nx.ancestors(graph, u) | {u}
            below = nx.descendants(graph, v) | {v}
            for a in above:
                for b in below:
                    for tag in classes:
                        tags.add((a, b, tag))

        return cls(
            carrier=carrier,
            pairs=frozenset(closure.edges()),
            support=frozenset(tags),
        )

    def support_map(self) -> Dict[Pair, FrozenSet[PreferenceClass]]:
        mapping: Dict[Pair, set] = {pair: set() for pair in self.pairs}
        for x, y, tag in self.support:
            mapping[(x, y)].add(tag)
        return {pair: frozenset(tags) for pair, tags in mapping.items()}

    def support_of(self, x: str, y: str) -> FrozenSet[PreferenceClass]:
        return frozenset(tag for a, b, tag in self.support if (a, b) == (x, y))

    def add_pair(
        self, x: str, y: str, support: Iterable[PreferenceClass] = ()
    ) -> "StrictPartialOrder":
        """Return a new order with ``x`` outranking ``y``, closure recomputed."""
        missing = {x, y} - self.carrier
        if missing:
            raise UnknownEntity(f"Unknown entities {sorted(missing)}")
        if x == y or (y, x) in self.pairs:
            raise CycleError(f"Adding ({x}, {y}) would create a cycle")
        tags = self.support_map()
        tags[(x, y)] = tags.get((x, y), frozenset()) | frozenset(support)
        return self.from_pairs(self.carrier, self.pairs | {(x, y)}, tags)

    def reverse(self) -> "StrictPartialOrder":
        """Flip every pair; incomparable elements stay incomparable."""
        return StrictPartialOrder(
            carrier=self.carrier,
            pairs=frozenset((y, x) for x, y in self.pairs),
            support=frozenset((y, x, tag) for x, y, tag in self.support),
        )

    def maximal(self) -> FrozenSet[str]:
        if not self.carrier:
            raise EmptyCarrier()
        dominated = {y for _, y in self.pairs}
        return frozenset(self.carrier - dominated)

    def restrict(self, subset: Iterable[str]) -> "StrictPartialOrder":
        subset = frozenset(subset)
        if not subset <= self.carrier:
            raise NotASubset(f"{sorted(subset - self.carrier)} not in carrier")
        return StrictPartialOrder(
            carrier=subset,
            pairs=frozenset((x, y) for x, y in self.pairs if x in subset and y in subset),
            support=frozenset(
                (x, y, tag) for x, y, tag in self.support if x in subset and y in subset
            ),
        )

    def outranks(self, x: str, y: str) -> bool:
        return (x, y) in self.pairs

    def incomparable(self, x: str, y: str) -> bool:
        return x != y and (x, y) not in self.pairs and (y, x) not in self.pairs

    def is_total(self) -> bool:
        items = sorted(self.carrier)
        return all(
            not self.incomparable(a, b) for i, a in enumerate(items) for b in items[i + 1 :]
        )

    def sorted_pairs(self) -> List[Pair]:
        return sorted(self.pairs)

    def render(self, symbol: str = ">") -> List[str]:
        return [f"{x}{symbol}{y}" for x, y in self.sorted_pairs()]


def render_set(ids: Iterable[str]) -> str:
    return "{" + ", ".join(sorted(ids)) + "}"
