"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the package's own algorithms so tests
compare two separately written routes: poset enumeration by brute force,
representation-finiteness by permutation search against a hard-coded
critical list, and a fixed-step reference flow with its own projector and
moment computations.
"""

from __future__ import annotations

from itertools import combinations, permutations

import numpy as np
import pytest

import posetrep as pr


# ---------------------------------------------------------------------------
# exhaustive poset enumeration (independent of posetrep.build_poset)

def all_strict_orders(n: int) -> list[set[tuple[int, int]]]:
    """Every strict partial order on {0, ..., n-1}, as sets of pairs."""
    items = list(range(n))
    ordered_pairs = [(i, j) for i in items for j in items if i != j]
    out = []
    for bits in range(1 << len(ordered_pairs)):
        rel = {p for k, p in enumerate(ordered_pairs) if bits >> k & 1}
        if any((b, a) in rel for a, b in rel):
            continue
        if any(
            (a, c) not in rel
            for a, b in rel
            for b2, c in rel
            if b == b2 and a != c
        ):
            continue
        if any((a, c) in rel and (c, a) in rel for a in items for c in items):
            continue
        out.append(rel)
    return out


def poset_from_pairs(n: int, rel: set[tuple[int, int]]) -> pr.Poset:
    names = [f"x{i}" for i in range(n)]
    return pr.build_poset(names, [(names[a], names[b]) for a, b in rel])


# ---------------------------------------------------------------------------
# representation-finiteness oracle: permutation search over a literal list

_CRITICAL_RELATIONS: tuple[tuple[int, frozenset[tuple[int, int]]], ...] = (
    # element count, strict order pairs on range(count)
    (4, frozenset()),  # four incomparable points
    (6, frozenset({(0, 1), (2, 3), (4, 5)})),  # three 2-chains
    (7, frozenset({(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)})),
    (8, frozenset({(1, 2), (3, 4), (4, 5), (5, 6), (6, 7), (3, 5), (3, 6),
                   (3, 7), (4, 6), (4, 7), (5, 7)})),
    # zigzag (a < b, c < b, c < d) next to a 4-chain
    (8, frozenset({(0, 1), (2, 1), (2, 3), (4, 5), (5, 6), (6, 7), (4, 6),
                   (4, 7), (5, 7)})),
)


def _embeds(sub_n: int, sub_rel: frozenset, p: pr.Poset) -> bool:
    elems = p.elements
    pairs = p.pairs
    for subset in combinations(range(len(elems)), sub_n):
        for perm in permutations(subset):
            image = [elems[i] for i in perm]
            ok = True
            for a in range(sub_n):
                for b in range(sub_n):
                    if a == b:
                        continue
                    want = (a, b) in sub_rel
                    have = (image[a], image[b]) in pairs
                    if want != have:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                return True
    return False


def oracle_rep_finite(p: pr.Poset) -> bool:
    return not any(_embeds(n, rel, p) for n, rel in _CRITICAL_RELATIONS)


# ---------------------------------------------------------------------------
# reference gradient flow: fixed step, QR projectors, no line search

def reference_flow(rep, w, steps: int = 4000, eta: float = 0.05):
    """Naive descent on the same functional; returns (projections, residual)."""
    d0 = rep.ambient_dim
    chi0 = float(w.chi0)
    chi = {e: float(v) for e, v in w.chi.items()}
    g = np.eye(d0, dtype=complex)
    for _ in range(steps):
        projs = {}
        for e in rep.poset.elements:
            m = g @ rep.spans[e]
            if m.shape[1] == 0:
                projs[e] = np.zeros((d0, d0), dtype=complex)
                continue
            q, _r = np.linalg.qr(m)
            q = q[:, : m.shape[1]]
            projs[e] = q @ q.conj().T
        mu = sum(chi[e] * projs[e] for e in rep.poset.elements) - chi0 * np.eye(d0)
        w_eig, v_eig = np.linalg.eigh(mu)
        g = (v_eig * np.exp(-eta * w_eig)) @ v_eig.conj().T @ g
        g = g / np.linalg.norm(g, 2)
    residual = float(np.linalg.norm(mu))
    return projs, residual


# ---------------------------------------------------------------------------
# randomized helpers

def random_poset(rng: np.random.Generator, n: int, density: float = 0.4) -> pr.Poset:
    names = [f"x{i}" for i in range(n)]
    pairs = [
        (names[i], names[j])
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < density
    ]
    return pr.build_poset(names, pairs)


def random_nested_rep(rng: np.random.Generator, p: pr.Poset, d0: int):
    """Random subspace representation honoring every nesting constraint."""
    from posetrep.linalg import orthonormal_columns, random_subspace

    target = {e: int(rng.integers(0, d0 + 1)) for e in p.elements}
    spans: dict[str, np.ndarray] = {}
    for e in p.linear_extension():
        below = [f for f in p.elements if (f, e) in p.pairs]
        base = np.zeros((d0, 0), dtype=complex)
        for f in below:
            base = np.concatenate([base, spans[f]], axis=1)
        if base.shape[1]:
            base = orthonormal_columns(base)
        extra = max(target[e] - base.shape[1], 0)
        if extra:
            base = orthonormal_columns(
                np.concatenate([base, random_subspace(rng, d0, extra)], axis=1)
            )
        spans[e] = base
    return pr.make_rep(p, d0, spans)


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture(scope="session")
def anti4():
    return pr.primitive_poset(1, 1, 1, 1)
