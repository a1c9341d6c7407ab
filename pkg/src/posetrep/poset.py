"""Finite posets, their covering quivers, and representation-finiteness.

A poset here is a finite set of named elements with a strict partial order.
Every poset is silently extended by a maximal element ``*`` when we pass to
quivers: the covering quiver has one vertex per element plus ``*``, one arrow
for each covering pair, and one arrow from each maximal element into ``*``.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, NamedTuple

from .errors import CycleError, DuplicateElement, InvalidElement

ROOT = "*"


def _check_name(name: str) -> str:
    if not isinstance(name, str) or not name:
        raise InvalidElement(f"element id must be a non-empty string, got {name!r}")
    if name == ROOT:
        raise InvalidElement(f"element id {ROOT!r} is reserved for the added maximum")
    if any(ch.isspace() for ch in name) or "<" in name or "," in name or ";" in name:
        raise InvalidElement(f"element id {name!r} contains whitespace or a delimiter")
    return name


class Poset:
    """Immutable finite poset.

    ``elements`` keeps construction order; that order fixes how dimension
    vectors and file formats index the elements.  ``pairs`` is the full strict
    order, i.e. the set of (a, b) with a < b, always transitively closed.
    Construct through :func:`build_poset` unless the pairs are already closed.
    """

    __slots__ = ("elements", "pairs", "_below", "_above")

    def __init__(self, elements: Iterable[str], pairs: Iterable[tuple[str, str]]):
        elements = tuple(elements)
        seen = set()
        for e in elements:
            _check_name(e)
            if e in seen:
                raise DuplicateElement(f"element {e!r} listed twice")
            seen.add(e)
        pairs = frozenset(pairs)
        below: dict[str, set[str]] = {e: set() for e in elements}
        above: dict[str, set[str]] = {e: set() for e in elements}
        for a, b in pairs:
            if a not in seen or b not in seen:
                raise InvalidElement(f"order pair ({a!r}, {b!r}) uses unknown element")
            if a == b:
                raise CycleError(f"element {a!r} compares below itself")
            above[a].add(b)
            below[b].add(a)
        for a, b in pairs:
            for c in above[b]:
                if c == a:
                    raise CycleError(f"cycle through {a!r} and {b!r}")
                if c not in above[a]:
                    raise ValueError("order pairs are not transitively closed")
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "_below", below)
        object.__setattr__(self, "_above", above)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("Poset is immutable")

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poset):
            return NotImplemented
        return frozenset(self.elements) == frozenset(other.elements) and self.pairs == other.pairs

    def __hash__(self) -> int:
        return hash((frozenset(self.elements), self.pairs))

    def __repr__(self) -> str:
        return f"Poset({list(self.elements)}, {sorted(self.pairs)})"

    def precedes(self, a: str, b: str) -> bool:
        """True when a < b in the strict order."""
        return (a, b) in self.pairs

    def comparable(self, a: str, b: str) -> bool:
        return a == b or (a, b) in self.pairs or (b, a) in self.pairs

    def below(self, e: str) -> frozenset[str]:
        return frozenset(self._below[e])

    def above(self, e: str) -> frozenset[str]:
        return frozenset(self._above[e])

    def covers(self) -> tuple[tuple[str, str], ...]:
        """Covering pairs (a, b): a < b with nothing strictly between."""
        out = []
        for a, b in self.pairs:
            if not (self._above[a] & self._below[b]):
                out.append((a, b))
        order = {e: k for k, e in enumerate(self.elements)}
        out.sort(key=lambda p: (order[p[0]], order[p[1]]))
        return tuple(out)

    def maximal_elements(self) -> tuple[str, ...]:
        return tuple(e for e in self.elements if not self._above[e])

    def minimal_elements(self) -> tuple[str, ...]:
        return tuple(e for e in self.elements if not self._below[e])

    def restrict(self, subset: Iterable[str]) -> "Poset":
        """Full subposet on the given elements, keeping stored order."""
        keep = set(subset)
        elems = tuple(e for e in self.elements if e in keep)
        if len(elems) != len(keep):
            raise InvalidElement("restriction subset contains unknown elements")
        pairs = {(a, b) for a, b in self.pairs if a in keep and b in keep}
        return Poset(elems, pairs)

    def linear_extension(self) -> tuple[str, ...]:
        """Elements reordered so that a < b implies a comes first (stable)."""
        remaining = list(self.elements)
        placed: list[str] = []
        placed_set: set[str] = set()
        while remaining:
            for e in remaining:
                if self._below[e] <= placed_set:
                    placed.append(e)
                    placed_set.add(e)
                    remaining.remove(e)
                    break
            else:  # pragma: no cover - impossible for a valid order
                raise CycleError("no linear extension exists")
        return tuple(placed)


def build_poset(elements: Iterable[str], covers: Iterable[tuple[str, str]]) -> Poset:
    """Build a poset from element ids and generating pairs a < b.

    The pairs need not be covering pairs; the transitive closure is taken.
    Raises CycleError when closure would force x < x and DuplicateElement on
    repeated ids.
    """
    elements = tuple(elements)
    names = set()
    for e in elements:
        _check_name(e)
        if e in names:
            raise DuplicateElement(f"element {e!r} listed twice")
        names.add(e)
    succ: dict[str, set[str]] = {e: set() for e in elements}
    for a, b in covers:
        if a not in names or b not in names:
            raise InvalidElement(f"cover ({a!r}, {b!r}) uses unknown element")
        if a == b:
            raise CycleError(f"cover {a!r} < {a!r} is a cycle")
        succ[a].add(b)
    # Warshall closure on the successor sets.
    for k in elements:
        for a in elements:
            if k in succ[a]:
                succ[a] |= succ[k]
    pairs = set()
    for a in elements:
        if a in succ[a]:
            raise CycleError(f"covers force {a!r} < {a!r}")
        pairs.update((a, b) for b in succ[a])
    return Poset(elements, pairs)


class Quiver(NamedTuple):
    """Finite acyclic quiver: vertex tuple plus (source, target) arrows."""

    vertices: tuple[str, ...]
    arrows: tuple[tuple[str, str], ...]

    def validate(self) -> "Quiver":
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise DuplicateElement("quiver has a repeated vertex")
        seen = set()
        for a in self.arrows:
            if a[0] not in vs or a[1] not in vs:
                raise InvalidElement(f"arrow {a} uses unknown vertex")
            if a in seen:
                raise DuplicateElement(f"arrow {a} listed twice")
            seen.add(a)
        self.topological_order()
        return self

    def out_arrows(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {v: [] for v in self.vertices}
        for s, t in self.arrows:
            out[s].append(t)
        return out

    def topological_order(self) -> tuple[str, ...]:
        """Stable topological order; raises CycleError on a directed cycle."""
        indeg = {v: 0 for v in self.vertices}
        for _, t in self.arrows:
            indeg[t] += 1
        out = self.out_arrows()
        order: list[str] = []
        ready = [v for v in self.vertices if indeg[v] == 0]
        while ready:
            v = ready.pop(0)
            order.append(v)
            for t in out[v]:
                indeg[t] -= 1
                if indeg[t] == 0:
                    ready.append(t)
            ready.sort(key=self.vertices.index)
        if len(order) != len(self.vertices):
            raise CycleError("quiver has a directed cycle")
        return tuple(order)

    def paths(self, src: str, dst: str) -> list[tuple[str, ...]]:
        """All directed paths src -> dst as vertex tuples (trivial included)."""
        return [p for p in self.paths_from(src) if p[-1] == dst]

    def paths_from(self, src: str) -> list[tuple[str, ...]]:
        out = self.out_arrows()
        found: list[tuple[str, ...]] = []
        stack: list[tuple[str, ...]] = [(src,)]
        while stack:
            p = stack.pop()
            found.append(p)
            for t in out[p[-1]]:
                stack.append(p + (t,))
        return found

    def all_paths(self) -> list[tuple[str, ...]]:
        res: list[tuple[str, ...]] = []
        for v in self.vertices:
            res.extend(self.paths_from(v))
        res.sort(key=lambda p: (len(p), tuple(self.vertices.index(x) for x in p)))
        return res


def hasse_quiver(p: Poset) -> Quiver:
    """Covering quiver of the poset extended by a maximum ``*``.

    One vertex per element plus ``*``; arrows are the covering pairs, oriented
    upward, together with one arrow m -> ``*`` for each maximal element m.
    The empty poset gives the one-vertex quiver.
    """
    arrows = list(p.covers())
    arrows.extend((m, ROOT) for m in p.maximal_elements())
    return Quiver(p.elements + (ROOT,), tuple(arrows)).validate()


class PrimitivityResult(NamedTuple):
    primitive: bool
    profile: tuple[int, ...] | None


def is_primitive(p: Poset) -> PrimitivityResult:
    """Test whether the poset is a disjoint union of chains.

    Returns the chain-length profile sorted ascending when it is.  Equivalent
    to the covering quiver being star shaped: every non-root vertex then has
    exactly one outgoing arrow and at most one incoming arrow.
    """
    # Connected components of the comparability graph.
    parent = {e: e for e in p.elements}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in p.pairs:
        parent[find(a)] = find(b)
    comps: dict[str, list[str]] = {}
    for e in p.elements:
        comps.setdefault(find(e), []).append(e)
    profile = []
    for comp in comps.values():
        for a, b in combinations(comp, 2):
            if not p.comparable(a, b):
                return PrimitivityResult(False, None)
        profile.append(len(comp))
    return PrimitivityResult(True, tuple(sorted(profile)))


def primitive_poset(*chain_lengths: int) -> Poset:
    """Disjoint union of chains with the given lengths.

    Elements are named a1, a2, ... across the chains in the order given, each
    chain ordered bottom to top.  primitive_poset(1, 2) has elements a1 and
    a2 < a3.
    """
    elements: list[str] = []
    covers: list[tuple[str, str]] = []
    k = 0
    for n in chain_lengths:
        if n < 1:
            raise ValueError("chain lengths must be positive")
        chain = [f"a{k + i + 1}" for i in range(n)]
        k += n
        elements.extend(chain)
        covers.extend(zip(chain, chain[1:]))
    return build_poset(elements, covers)


def n_poset() -> Poset:
    """The four-element zigzag: n1 < n2, n3 < n2, n3 < n4."""
    return build_poset(
        ["n1", "n2", "n3", "n4"], [("n1", "n2"), ("n3", "n2"), ("n3", "n4")]
    )


def n4_poset() -> Poset:
    """Disjoint union of the zigzag and a four-element chain c1 < ... < c4."""
    elems = ["n1", "n2", "n3", "n4", "c1", "c2", "c3", "c4"]
    covers = [
        ("n1", "n2"),
        ("n3", "n2"),
        ("n3", "n4"),
        ("c1", "c2"),
        ("c2", "c3"),
        ("c3", "c4"),
    ]
    return build_poset(elems, covers)


#: Minimal posets of infinite representation type (Kleiner's list).  A finite
#: poset has finitely many indecomposable subspace representations iff it
#: contains no full subposet isomorphic to one of these.
CRITICAL_POSETS: tuple[tuple[str, Poset], ...] = (
    ("(1,1,1,1)", primitive_poset(1, 1, 1, 1)),
    ("(2,2,2)", primitive_poset(2, 2, 2)),
    ("(1,3,3)", primitive_poset(1, 3, 3)),
    ("(1,2,5)", primitive_poset(1, 2, 5)),
    ("(N,4)", n4_poset()),
)


def _invariant(p: Poset, e: str) -> tuple[int, int]:
    return (len(p._below[e]), len(p._above[e]))


def order_isomorphic(p: Poset, q: Poset) -> bool:
    """Backtracking order-isomorphism test for small posets."""
    if len(p) != len(q) or len(p.pairs) != len(q.pairs):
        return False
    pinv = {e: _invariant(p, e) for e in p.elements}
    qinv = {e: _invariant(q, e) for e in q.elements}
    if sorted(pinv.values()) != sorted(qinv.values()):
        return False
    q_by_inv: dict[tuple[int, int], list[str]] = {}
    for e in q.elements:
        q_by_inv.setdefault(qinv[e], []).append(e)
    # Match most constrained elements first.
    p_order = sorted(p.elements, key=lambda e: len(q_by_inv[pinv[e]]))
    assignment: dict[str, str] = {}
    used: set[str] = set()

    def extend(k: int) -> bool:
        if k == len(p_order):
            return True
        a = p_order[k]
        for b in q_by_inv[pinv[a]]:
            if b in used:
                continue
            ok = True
            for c, d in assignment.items():
                if p.precedes(a, c) != q.precedes(b, d) or p.precedes(c, a) != q.precedes(d, b):
                    ok = False
                    break
            if ok:
                assignment[a] = b
                used.add(b)
                if extend(k + 1):
                    return True
                del assignment[a]
                used.remove(b)
        return False

    return extend(0)


class FinitenessResult(NamedTuple):
    finite: bool
    witnesses: tuple[tuple[str, tuple[str, ...]], ...]


def is_representation_finite(p: Poset) -> FinitenessResult:
    """Search for full subposets isomorphic to a critical poset.

    Returns finite=True with no witnesses, or finite=False with every
    (critical name, element subset) found.  Exhaustive subset search; meant
    for posets of order up to about 12.
    """
    witnesses: list[tuple[str, tuple[str, ...]]] = []
    for name, crit in CRITICAL_POSETS:
        if len(crit) > len(p):
            continue
        for subset in combinations(p.elements, len(crit)):
            if order_isomorphic(p.restrict(subset), crit):
                witnesses.append((name, subset))
    return FinitenessResult(not witnesses, tuple(witnesses))
