"""Bound quivers attached to posets and their numerical invariants.

The covering quiver of a poset, bound by all commutativity relations (any two
parallel directed paths are identified), has the incidence algebra of the
extended poset as its path algebra quotient.  This module computes the path
basis, minimal relation counts, the Cartan matrix, the Euler form, and the
lower bound for the dimension of the representation-variety quotient.  All of
that is exact integer/rational arithmetic; the only floating point here lives
in the translation between subspace representations and quiver
representations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Iterable, NamedTuple

import numpy as np

from . import linalg
from .errors import (
    NotHasseQuiver,
    NotSubspaceRep,
    PosetMismatch,
    RelationViolation,
    WrongShape,
)
from .linrep import SubspaceRep, make_rep
from .poset import ROOT, Poset, Quiver, hasse_quiver

Path = tuple[str, ...]


# ---------------------------------------------------------------------------
# exact rational elimination, enough for ranks and unitriangular solves

def _frac_rank(rows: list[list[Fraction]]) -> int:
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    col = 0
    while rank < len(rows) and col < ncols:
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        for r in range(rank + 1, len(rows)):
            if rows[r][col]:
                f = rows[r][col] / pv
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


# ---------------------------------------------------------------------------

class DimVector(NamedTuple):
    """Dimension vector: root entry first, then one entry per poset element
    in stored poset order."""

    entries: tuple[int, ...]

    @property
    def root(self) -> int:
        return self.entries[0]

    def validate(self, poset: Poset) -> "DimVector":
        if len(self.entries) != len(poset) + 1:
            raise WrongShape(
                f"dimension vector has {len(self.entries)} entries, poset needs {len(poset) + 1}"
            )
        if any(d < 0 for d in self.entries):
            raise WrongShape("dimension vector entries must be nonnegative")
        return self

    def by_vertex(self, poset: Poset) -> dict[str, int]:
        self.validate(poset)
        out = {ROOT: self.entries[0]}
        out.update(zip(poset.elements, self.entries[1:]))
        return out

    def is_zero(self) -> bool:
        return not any(self.entries)


def _concat(u: Path, p: Path, v: Path) -> Path:
    return u + p[1:] + v[1:]


def _arrow_len(p: Path) -> int:
    return len(p) - 1


@dataclass(frozen=True)
class BoundQuiver:
    """A quiver together with commutativity relations and its path basis.

    Each relation is an ordered pair of distinct parallel paths (same source,
    same target, both of arrow length >= 2); the relation ideal is generated
    by their differences inside the path algebra.
    """

    quiver: Quiver
    relations: tuple[tuple[Path, Path], ...]
    path_basis: tuple[Path, ...] = field(default=())

    def __post_init__(self):
        if not self.path_basis:
            object.__setattr__(self, "path_basis", tuple(self.quiver.all_paths()))
        for p, q in self.relations:
            if p[0] != q[0] or p[-1] != q[-1]:
                raise WrongShape(f"relation sides {p} and {q} have different endpoints")
            if _arrow_len(p) < 2 or _arrow_len(q) < 2:
                raise WrongShape("relation paths must have arrow length at least 2")

    def paths(self, src: str, dst: str) -> list[Path]:
        return [p for p in self.path_basis if p[0] == src and p[-1] == dst]


def commutativity_ideal(q: Quiver) -> BoundQuiver:
    """Bind an acyclic quiver by all parallel-path identifications.

    One generator per unordered pair of distinct directed paths with the same
    endpoints.  If some parallel pair involves a single arrow the quiver is
    not a covering quiver (the arrow would not be a cover) and the admissible
    ideal does not exist: NotHasseQuiver.
    """
    q.validate()
    groups: dict[tuple[str, str], list[Path]] = {}
    for p in q.all_paths():
        if len(p) > 1:
            groups.setdefault((p[0], p[-1]), []).append(p)
    relations: list[tuple[Path, Path]] = []
    for (src, dst), paths in sorted(groups.items(), key=lambda kv: kv[0]):
        if len(paths) < 2:
            continue
        paths.sort(key=lambda p: (len(p), p))
        if _arrow_len(paths[0]) == 1:
            raise NotHasseQuiver(
                f"arrow {src} -> {dst} is parallel to a longer path; "
                "not a covering quiver"
            )
        for i in range(len(paths)):
            for j in range(i + 1, len(paths)):
                relations.append((paths[i], paths[j]))
    return BoundQuiver(q, tuple(relations))


def bound_quiver_of(p: Poset) -> BoundQuiver:
    """Covering quiver of the extended poset with its commutativity ideal."""
    return commutativity_ideal(hasse_quiver(p))


def _ideal_vectors(bq: BoundQuiver, src: str, dst: str, minimal: bool):
    """Spanning vectors of the (src, dst) component of the relation ideal.

    With minimal=False returns generators of I(src, dst); with minimal=True
    only the products path * generator * path where at least one outer path
    is nontrivial, i.e. the component of RQ*I + I*RQ.
    """
    basis = bq.paths(src, dst)
    index = {p: k for k, p in enumerate(basis)}
    vectors: list[list[Fraction]] = []
    for p1, p2 in bq.relations:
        a, b = p1[0], p1[-1]
        for u in bq.paths(src, a):
            for v in bq.paths(b, dst):
                if minimal and _arrow_len(u) == 0 and _arrow_len(v) == 0:
                    continue
                row = [Fraction(0)] * len(basis)
                row[index[_concat(u, p1, v)]] += 1
                row[index[_concat(u, p2, v)]] -= 1
                if any(row):
                    vectors.append(row)
    return basis, vectors


def minimal_relation_counts(bq: BoundQuiver) -> dict[tuple[str, str], int]:
    """Number of minimal relations between each vertex pair.

    r(i, j) is the dimension of the (i, j) component of I/(RQ*I + I*RQ),
    computed by exact rank over the rationals on the finite path space.
    Only nonzero entries are returned.
    """
    counts: dict[tuple[str, str], int] = {}
    endpoints = sorted({(p1[0], p1[-1]) for p1, _ in bq.relations})
    verts = bq.quiver.vertices
    for src in verts:
        for dst in verts:
            if not any(
                bq.paths(src, a) and bq.paths(b, dst) for a, b in endpoints
            ):
                continue
            _, gens = _ideal_vectors(bq, src, dst, minimal=False)
            _, sub = _ideal_vectors(bq, src, dst, minimal=True)
            r = _frac_rank(gens) - _frac_rank(sub)
            if r:
                counts[(src, dst)] = r
    return counts


@dataclass(frozen=True)
class CartanMatrix:
    """Integer matrix of path-space dimensions modulo the relation ideal.

    entry[i][j] counts independent paths from order[i] to order[j] in the
    quotient algebra; order is topological, root last for poset quivers, so
    the matrix is upper unitriangular and integrally invertible.
    """

    order: tuple[str, ...]
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.order)
        for i in range(n):
            if self.entries[i][i] != 1:
                raise WrongShape("Cartan matrix must have unit diagonal")
            for j in range(n):
                if j < i and self.entries[i][j] != 0:
                    raise WrongShape("Cartan matrix must be upper triangular")

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)

    def solve(self, rhs: list[Fraction]) -> list[Fraction]:
        """Back substitution for C x = rhs, exact."""
        n = len(self.order)
        x = [Fraction(0)] * n
        for i in range(n - 1, -1, -1):
            acc = rhs[i]
            for j in range(i + 1, n):
                acc -= self.entries[i][j] * x[j]
            x[i] = acc
        return x

    def inverse(self) -> tuple[tuple[int, ...], ...]:
        n = len(self.order)
        cols = []
        for k in range(n):
            e = [Fraction(int(i == k)) for i in range(n)]
            cols.append(self.solve(e))
        inv = tuple(
            tuple(int(cols[j][i]) for j in range(n)) for i in range(n)
        )
        return inv


def cartan_matrix(bq: BoundQuiver) -> CartanMatrix:
    """Cartan matrix of the bound quiver algebra.

    For poset-derived bound quivers all parallel paths are identified, so the
    entry for (i, j) is 1 exactly when there is any path i -> j, i.e. the
    matrix is the zeta matrix of the extended poset.
    """
    order = bq.quiver.topological_order()
    entries = []
    for src in order:
        row = []
        for dst in order:
            basis = bq.paths(src, dst)
            if not basis:
                row.append(0)
                continue
            _, gens = _ideal_vectors(bq, src, dst, minimal=False)
            row.append(len(basis) - _frac_rank(gens))
        entries.append(tuple(row))
    return CartanMatrix(order, tuple(entries))


def _vertex_vector(bq: BoundQuiver, order: tuple[str, ...], d: DimVector) -> list[Fraction]:
    verts = bq.quiver.vertices
    if len(d.entries) != len(verts):
        raise WrongShape(
            f"dimension vector has {len(d.entries)} entries, quiver has {len(verts)} vertices"
        )
    named = {ROOT: d.entries[0]}
    named.update(zip((v for v in verts if v != ROOT), d.entries[1:]))
    return [Fraction(named[v]) for v in order]


def euler_form(bq: BoundQuiver, d: DimVector, e: DimVector | None = None) -> int:
    """Homological bilinear form <d, e> = d^T C^{-1} e, exact integer.

    For an unbound quiver this reduces to
    sum_q d_q e_q - sum_{arrows i->j} d_i e_j.
    """
    if e is None:
        e = d
    c = cartan_matrix(bq)
    dv = _vertex_vector(bq, c.order, d)
    ev = _vertex_vector(bq, c.order, e)
    x = c.solve(ev)
    val = sum(a * b for a, b in zip(dv, x))
    if val.denominator != 1:
        raise WrongShape("Euler form value is not an integer; Cartan matrix invalid")
    return int(val)


class QuotientDim(NamedTuple):
    value: int
    empty_quotient: bool


def quotient_dim_lower_bound(bq: BoundQuiver, d: DimVector) -> QuotientDim:
    """Lower bound for the dimension of the representation-variety quotient:

        1 - sum_i d_i^2 + sum_{arrows i->j} d_i d_j - sum_{i,j} r(i,j) d_i d_j

    with r the minimal relation counts.  The zero vector gives 1 with the
    empty_quotient flag set.
    """
    verts = bq.quiver.vertices
    named = {ROOT: d.entries[0]}
    if len(d.entries) != len(verts):
        raise WrongShape("dimension vector does not match quiver")
    named.update(zip((v for v in verts if v != ROOT), d.entries[1:]))
    if any(x < 0 for x in d.entries):
        raise WrongShape("dimension vector entries must be nonnegative")
    val = 1 - sum(x * x for x in named.values())
    for s, t in bq.quiver.arrows:
        val += named[s] * named[t]
    for (i, j), r in minimal_relation_counts(bq).items():
        val -= r * named[i] * named[j]
    return QuotientDim(val, d.is_zero())


# ---------------------------------------------------------------------------
# translation between subspace representations and quiver representations

@dataclass
class QuiverRep:
    """Representation of a bound quiver: one space per vertex, one map per
    arrow, maps stored as (target dim x source dim) complex matrices."""

    bound_quiver: BoundQuiver
    dims: dict[str, int]
    maps: dict[tuple[str, str], np.ndarray]

    def dim_vector(self, poset: Poset) -> DimVector:
        return DimVector((self.dims[ROOT],) + tuple(self.dims[e] for e in poset.elements))

    def path_map(self, path: Path) -> np.ndarray:
        m = np.eye(self.dims[path[0]], dtype=complex)
        for s, t in zip(path, path[1:]):
            m = self.maps[(s, t)] @ m
        return m


def rep_to_quiver(rep: SubspaceRep) -> QuiverRep:
    """Structure maps of the subspace representation over the bound quiver.

    The root carries the ambient space with the standard basis; each element
    carries its subspace in the stored orthonormal basis; each arrow i -> j
    gets the coordinate matrix of the inclusion V_i <= V_j.
    """
    bq = bound_quiver_of(rep.poset)
    dims = {ROOT: rep.ambient_dim}
    dims.update({e: rep.dim(e) for e in rep.poset.elements})
    maps: dict[tuple[str, str], np.ndarray] = {}
    for s, t in bq.quiver.arrows:
        qs = rep.spans[s]
        maps[(s, t)] = qs.copy() if t == ROOT else rep.spans[t].conj().T @ qs
    return QuiverRep(bq, dims, maps)


def quiver_to_rep(qrep: QuiverRep, tol: float = 1e-9) -> SubspaceRep:
    """Rebuild the subspace representation from quiver data.

    Every structure map must be injective (NotSubspaceRep) and every
    commutativity relation must vanish (RelationViolation); the subspace at
    element i is the image of the composite map along any path i -> root.
    """
    bq = qrep.bound_quiver
    verts = bq.quiver.vertices
    elements = tuple(v for v in verts if v != ROOT)
    for (s, t), m in qrep.maps.items():
        if m.shape != (qrep.dims[t], qrep.dims[s]):
            raise WrongShape(f"map for arrow {s}->{t} has shape {m.shape}")
        if qrep.dims[s] and linalg.numerical_rank(m, tol) < qrep.dims[s]:
            raise NotSubspaceRep(f"structure map for arrow {s} -> {t} is not injective")
    for p1, p2 in bq.relations:
        m1, m2 = qrep.path_map(p1), qrep.path_map(p2)
        scale = max(np.linalg.norm(m1), np.linalg.norm(m2), 1.0)
        if np.linalg.norm(m1 - m2) > tol * scale:
            raise RelationViolation(f"relation {p1} = {p2} fails")
    poset = _poset_from_quiver(bq.quiver)
    spans = {}
    for e in elements:
        paths = bq.paths(e, ROOT)
        if not paths:
            raise WrongShape(f"vertex {e} has no path to the root")
        comp = qrep.path_map(paths[0])
        if qrep.dims[e] and linalg.numerical_rank(comp, tol) < qrep.dims[e]:
            raise NotSubspaceRep(f"composite map from {e} to the root drops rank")
        spans[e] = comp
    return make_rep(poset, qrep.dims[ROOT], spans, tol=tol)


def _poset_from_quiver(q: Quiver) -> Poset:
    elems = tuple(v for v in q.vertices if v != ROOT)
    covers = [(s, t) for s, t in q.arrows if t != ROOT]
    from .poset import build_poset

    return build_poset(elems, covers)


# ---------------------------------------------------------------------------
# dimension-assignment search

class AssignmentReport(NamedTuple):
    assignments: tuple[tuple[tuple[tuple[str, int], ...], int], ...]
    target: int | None
    matched: bool


def _components(p: Poset) -> list[list[str]]:
    parent = {e: e for e in p.elements}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in p.pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    comps: dict[str, list[str]] = {}
    for e in p.elements:
        comps.setdefault(find(e), []).append(e)
    # components ordered by first element occurrence
    return sorted(comps.values(), key=lambda c: p.elements.index(c[0]))


def enumerate_assignments(
    p: Poset, groups: tuple[tuple[int, ...], ...]
) -> list[dict[str, int]]:
    """All nesting-consistent ways to place grouped dimension entries.

    Each group is a multiset of entries for one connected component of the
    poset, components taken in stored element order.  An assignment is kept
    when d_a <= d_b for every order pair a < b.  Duplicate assignments from
    equal entries are removed.
    """
    comps = _components(p)
    if len(groups) == 1 and len(comps) != 1 and len(groups[0]) == len(p):
        comps = [list(p.elements)]
    if len(comps) != len(groups) or any(
        len(c) != len(g) for c, g in zip(comps, groups)
    ):
        raise WrongShape("entry groups do not match poset components")
    per_comp: list[list[dict[str, int]]] = []
    for comp, group in zip(comps, groups):
        found: list[dict[str, int]] = []
        seen: set[tuple[int, ...]] = set()
        for perm in permutations(group):
            if perm in seen:
                continue
            seen.add(perm)
            cand = dict(zip(comp, perm))
            if all(
                cand[a] <= cand[b]
                for a, b in p.pairs
                if a in cand and b in cand
            ):
                found.append(cand)
        per_comp.append(found)
    out: list[dict[str, int]] = [{}]
    for found in per_comp:
        out = [dict(base, **extra) for base in out for extra in found]
    return out


def assignment_report(
    p: Poset, root_dim: int, groups: tuple[tuple[int, ...], ...], target: int | None = None
) -> AssignmentReport:
    """Evaluate the quotient dimension bound over all consistent assignments."""
    bq = bound_quiver_of(p)
    rows = []
    matched = False
    for assignment in enumerate_assignments(p, groups):
        d = DimVector((root_dim,) + tuple(assignment[e] for e in p.elements))
        val = quotient_dim_lower_bound(bq, d).value
        if target is not None and val == target:
            matched = True
        rows.append((tuple(sorted(assignment.items())), val))
    return AssignmentReport(tuple(rows), target, matched)
