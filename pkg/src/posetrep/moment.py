"""Moment maps for weighted projection systems and the Kempf-Ness flow.

For a subspace representation with weight chi the moment map at a metric
g in GL(V) is

    mu(g) = sum_e chi_e P_{g V_e} - chi0 I.

A zero of mu on the GL-orbit of the representation is an orthoscalar system:
Hermitian idempotents of the prescribed ranks, nested along the poset
(P_i P_j = P_j P_i = P_i for i < j), summing with weights to chi0 I.  The
flow g <- exp(-eps mu(g)) g is gradient descent for the squared residual
F(g) = ||mu(g)||_F^2; it converges to residual zero exactly on the classes
that admit an orthoscalar representative, so a converged run is a numerical
polystability certificate and a positive-residual plateau certifies the
opposite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import (
    CheckFailed,
    NoTraceIdentity,
    NumericalBreakdown,
    SingularMetric,
    WrongShape,
)
from .linrep import SubspaceRep, Weight
from .poset import Poset


@dataclass
class ProjectionSystem:
    """Weighted family of Hermitian projections indexed by a poset."""

    poset: Poset
    weight: Weight
    projections: dict[str, np.ndarray]
    ranks: dict[str, int]

    @property
    def ambient_dim(self) -> int:
        for p in self.projections.values():
            return p.shape[0]
        return 0

    def subspace_rep(self, tol: float = 1e-8) -> SubspaceRep:
        """Representation spanned by the projection ranges (rank many columns)."""
        from .linrep import make_rep

        spans = {}
        for e in self.poset.elements:
            w, v = np.linalg.eigh(self.projections[e])
            spans[e] = v[:, np.argsort(w)[::-1][: self.ranks[e]]]
        return make_rep(self.poset, self.ambient_dim, spans, tol=tol)


class CheckReport:
    """Worst-case violations of the orthoscalar conditions."""

    def __init__(self, hermitian, idempotent, rank_dev, nesting, scalar, tol):
        self.hermitian = hermitian
        self.idempotent = idempotent
        self.rank_deviation = rank_dev
        self.nesting = nesting
        self.scalar = scalar
        self.tol = tol

    @property
    def passed(self) -> bool:
        worst = max(
            self.hermitian, self.idempotent, self.rank_deviation, self.nesting, self.scalar
        )
        return bool(worst < self.tol)

    def as_dict(self) -> dict:
        return {
            "hermitian": self.hermitian,
            "idempotent": self.idempotent,
            "rank_deviation": self.rank_deviation,
            "nesting": self.nesting,
            "scalar": self.scalar,
            "tol": self.tol,
            "passed": self.passed,
        }

    def __repr__(self) -> str:
        return f"CheckReport({self.as_dict()})"


def orthoscalar_check(ps: ProjectionSystem, tol: float = 1e-8) -> CheckReport:
    """Measure how far the system is from orthoscalar.

    Reports the worst violation of Hermitian symmetry, idempotency, the
    prescribed ranks (via traces), nesting P_i P_j = P_j P_i = P_i along the
    order, and the weighted scalar identity sum chi_e P_e = chi0 I.
    """
    ps.weight.aligned(ps.poset)
    d0 = ps.ambient_dim
    herm = idem = rank_dev = nesting = 0.0
    for e in ps.poset.elements:
        p = linalg.as_complex(ps.projections[e])
        if p.shape != (d0, d0):
            raise WrongShape(f"projection for {e!r} has shape {p.shape}")
        herm = max(herm, float(np.linalg.norm(p - p.conj().T)))
        idem = max(idem, float(np.linalg.norm(p @ p - p)))
        rank_dev = max(rank_dev, abs(float(np.trace(p).real) - ps.ranks[e]))
    for a, b in ps.poset.pairs:
        pa, pb = ps.projections[a], ps.projections[b]
        nesting = max(
            nesting,
            float(np.linalg.norm(pa @ pb - pa)),
            float(np.linalg.norm(pb @ pa - pa)),
        )
    scalar_m = -float(ps.weight.chi0) * np.eye(d0, dtype=complex)
    for e in ps.poset.elements:
        scalar_m = scalar_m + float(ps.weight.chi[e]) * ps.projections[e]
    scalar = float(np.linalg.norm(scalar_m))
    return CheckReport(herm, idem, rank_dev, nesting, scalar, tol)


def _projectors(rep: SubspaceRep, g: np.ndarray) -> dict[str, np.ndarray]:
    out = {}
    for e in rep.poset.elements:
        q = linalg.orthonormal_columns(g @ rep.spans[e], 1e-13)
        out[e] = q @ q.conj().T
    return out


def moment_value(rep: SubspaceRep, g: np.ndarray, w: Weight) -> np.ndarray:
    """mu(g) = sum_e chi_e P_{g V_e} - chi0 I, a traceless Hermitian matrix
    whenever the trace identity holds."""
    w.aligned(rep.poset)
    g = linalg.as_complex(g)
    if g.shape != (rep.ambient_dim, rep.ambient_dim):
        raise WrongShape(f"metric has shape {g.shape}, ambient is {rep.ambient_dim}")
    if linalg.condition_number(g) > 1e14:
        raise SingularMetric("metric is numerically singular")
    projs = _projectors(rep, g)
    mu = -float(w.chi0) * np.eye(rep.ambient_dim, dtype=complex)
    for e in rep.poset.elements:
        mu = mu + float(w.chi[e]) * projs[e]
    return mu


def kn_directional_derivative(
    rep: SubspaceRep, g: np.ndarray, w: Weight, h: np.ndarray
) -> float:
    """Derivative of F(exp(t h) g) = ||mu||_F^2 at t = 0, for Hermitian h.

    Equals 4 Re tr(mu D) with D = sum_e chi_e (I - P_e) h P_e.
    """
    mu = moment_value(rep, g, w)
    projs = _projectors(rep, g)
    eye = np.eye(rep.ambient_dim)
    d = np.zeros_like(mu)
    for e in rep.poset.elements:
        p = projs[e]
        d = d + float(w.chi[e]) * ((eye - p) @ h @ p)
    return float(4.0 * np.real(np.trace(mu @ d)))


@dataclass
class FlowOptions:
    tol: float = 1e-8
    max_iter: int = 20000
    step: float | None = None  # None: 1 / (4 chi0)
    seed: int = 0
    initial: str = "identity"  # or "random" (random unitary start)
    cond_cap: float = 1e12
    armijo_c: float = 0.1
    grow_every: int = 5
    plateau_grad: float = 1e-10
    plateau_window: int = 50


@dataclass
class FlowReport:
    status: str  # converged | plateau | max_iter
    iterations: int
    residual: float
    gradient_norm: float
    step: float
    condition: float
    history: list[float] = field(default_factory=list)
    final_metric: np.ndarray | None = None

    def as_dict(self) -> dict:
        from .fileio import format_complex

        metric = None
        if self.final_metric is not None:
            metric = [
                [format_complex(z) for z in row] for row in self.final_metric.tolist()
            ]
        return {
            "status": self.status,
            "iterations": self.iterations,
            "residual": self.residual,
            "gradient_norm": self.gradient_norm,
            "step": self.step,
            "condition": self.condition,
            "history": list(self.history),
            "final_metric": metric,
        }


def kempf_ness_flow(
    rep: SubspaceRep, w: Weight, opts: FlowOptions | None = None
) -> tuple[ProjectionSystem | None, FlowReport]:
    """Run gradient descent g <- exp(-eps mu(g)) g on F = ||mu||_F^2.

    Backtracking (Armijo) keeps the residual history monotone; the step is
    halved on rejection and doubled after grow_every consecutive accepts.
    Stops with status converged when the residual drops below tol, plateau
    when the gradient stays below plateau_grad for plateau_window iterations
    while the residual stays above 100 tol, and max_iter otherwise.  The
    weighted trace identity is required up front (NoTraceIdentity), and the
    metric condition number is capped (NumericalBreakdown).

    Returns the projection system of the final metric when converged, else
    None, together with the full report.
    """
    opts = opts or FlowOptions()
    w.aligned(rep.poset)
    if rep.ambient_dim == 0:
        raise WrongShape("flow needs a positive ambient dimension")
    if not w.trace_identity(rep):
        chi0_scaled, chi_scaled = w.common_integer(rep.poset)
        total = sum(chi_scaled[e] * rep.dim(e) for e in rep.poset.elements)
        raise NoTraceIdentity(
            f"sum chi_e d_e = {total} but chi0 d0 = {chi0_scaled * rep.ambient_dim} "
            "(after clearing denominators); no orthoscalar system exists"
        )
    d0 = rep.ambient_dim
    chi = {e: float(v) for e, v in w.chi.items()}
    chi0 = float(w.chi0)
    eye = np.eye(d0, dtype=complex)

    if opts.initial == "identity":
        g = eye.copy()
    elif opts.initial == "random":
        g = linalg.random_unitary(np.random.default_rng(opts.seed), d0)
    else:
        raise WrongShape(f"unknown initial metric choice {opts.initial!r}")

    def evaluate(metric):
        projs = {}
        for e in rep.poset.elements:
            q = linalg.orthonormal_columns(metric @ rep.spans[e], 1e-13)
            projs[e] = q @ q.conj().T
        mu = -chi0 * eye
        for e in rep.poset.elements:
            mu = mu + chi[e] * projs[e]
        return projs, mu, float(np.linalg.norm(mu))

    step = opts.step if opts.step is not None else 1.0 / (4.0 * chi0)
    projs, mu, residual = evaluate(g)
    history = [residual]
    grad_norm = np.inf
    plateau_count = 0
    accepts_in_row = 0
    status = "max_iter"
    iterations = 0

    for iterations in range(1, opts.max_iter + 1):
        if residual < opts.tol:
            status = "converged"
            iterations -= 1
            break
        grad_sq = 0.0
        for e in rep.poset.elements:
            p = projs[e]
            grad_sq += chi[e] * float(np.linalg.norm((eye - p) @ mu @ p)) ** 2
        grad_sq *= 4.0
        grad_norm = np.sqrt(grad_sq)
        if grad_norm < opts.plateau_grad and residual > 100 * opts.tol:
            plateau_count += 1
            if plateau_count >= opts.plateau_window:
                status = "plateau"
                break
        else:
            plateau_count = 0

        f_old = residual * residual
        accepted = False
        for _ in range(60):
            cand = linalg.herm_expm(-step * mu) @ g
            cand = cand / np.linalg.norm(cand, 2)
            cprojs, cmu, cres = evaluate(cand)
            # Strict decrease: at an exact critical point (grad 0) the
            # candidate leaves the residual unchanged and must be rejected,
            # otherwise step growth inflates the metric for nothing.
            if cres * cres < f_old - opts.armijo_c * step * grad_sq:
                accepted = True
                break
            step *= 0.5
        if accepted:
            g, projs, mu, residual = cand, cprojs, cmu, cres
            accepts_in_row += 1
            if accepts_in_row >= opts.grow_every:
                step = min(step * 2.0, 1e9)
                accepts_in_row = 0
        else:
            accepts_in_row = 0
        history.append(residual)
        if linalg.condition_number(g) > opts.cond_cap:
            raise NumericalBreakdown(
                f"metric condition number exceeded {opts.cond_cap:.0e} "
                f"at residual {residual:.3e}"
            )
    else:
        iterations = opts.max_iter

    if status != "converged" and residual < opts.tol:
        status = "converged"

    report = FlowReport(
        status=status,
        iterations=iterations,
        residual=residual,
        gradient_norm=float(grad_norm) if np.isfinite(grad_norm) else 0.0,
        step=step,
        condition=linalg.condition_number(g),
        history=history,
        final_metric=g,
    )
    if status != "converged":
        return None, report
    system = ProjectionSystem(
        poset=rep.poset,
        weight=w,
        projections=projs,
        ranks={e: rep.dim(e) for e in rep.poset.elements},
    )
    return system, report


def hopf_normal_form(ps: ProjectionSystem, tol: float = 1e-6) -> dict[str, np.ndarray]:
    """Isometry normal form A_e = sqrt(chi_e/chi0) Q_e of an orthoscalar system.

    Q_e is an orthonormal basis of range(P_e); the output satisfies
    A_e^* A_e = (chi_e/chi0) I and sum_e A_e A_e^* = I.  CheckFailed when the
    input is not orthoscalar at tol or the output fails its own checks.
    """
    report = orthoscalar_check(ps, tol)
    if not report.passed:
        raise CheckFailed(f"input system is not orthoscalar at {tol:.0e}: {report.as_dict()}")
    d0 = ps.ambient_dim
    chi = ps.weight.normalized(ps.poset)
    out: dict[str, np.ndarray] = {}
    total = np.zeros((d0, d0), dtype=complex)
    for e in ps.poset.elements:
        w, v = np.linalg.eigh(ps.projections[e])
        q = v[:, np.argsort(w)[::-1][: ps.ranks[e]]]
        a = np.sqrt(chi[e]) * q
        gram_dev = np.linalg.norm(a.conj().T @ a - chi[e] * np.eye(ps.ranks[e]))
        if gram_dev > tol:
            raise CheckFailed(f"normal form for {e!r} fails its Gram identity")
        out[e] = a
        total += a @ a.conj().T
    if np.linalg.norm(total - np.eye(d0)) > tol:
        raise CheckFailed("normal form blocks do not resolve the identity")
    return out


def unitary_invariants(
    ps: ProjectionSystem, max_len: int = 4
) -> dict[tuple[str, ...], complex]:
    """Trace monomials tr(P_{w1} ... P_{wk}) for words of length <= max_len.

    Words are reported once per cyclic class, keyed by the lexicographically
    smallest rotation (element order as stored in the poset), and listed in
    (length, word) order.  These traces separate unitary equivalence classes
    of projection families.
    """
    elems = ps.poset.elements
    index = {e: k for k, e in enumerate(elems)}

    def canonical(word: tuple[str, ...]) -> tuple[str, ...]:
        rots = [word[k:] + word[:k] for k in range(len(word))]
        return min(rots, key=lambda t: tuple(index[x] for x in t))

    out: dict[tuple[str, ...], complex] = {}
    words: list[tuple[str, ...]] = [()]
    for _ in range(max_len):
        words = [w + (e,) for w in words for e in elems]
        for word in words:
            if canonical(word) != word or word in out:
                continue
            m = np.eye(ps.ambient_dim, dtype=complex)
            for e in word:
                m = m @ ps.projections[e]
            out[word] = complex(np.trace(m))
    return out


def fourspace_parameters(ps: ProjectionSystem, tol: float = 1e-6) -> tuple[float, float, float]:
    """Sphere coordinates of an orthoscalar four-line system in C^2.

    Requires the four-element antichain, ambient dimension 2, all ranks 1,
    and weight proportional to (2; 1, 1, 1, 1).  Returns

        (tr(P1 P4), tr(P1 P3), tr(P1 P2))

    which are the squared coordinates (a^2, b^2, c^2) of the parametrizing
    unit sphere; the three components always sum to tr(P1) = 1.
    """
    p = ps.poset
    if len(p) != 4 or p.pairs:
        raise WrongShape("fourspace parameters need the four-element antichain")
    if ps.ambient_dim != 2:
        raise WrongShape("fourspace parameters need ambient dimension 2")
    if any(ps.ranks[e] != 1 for e in p.elements):
        raise WrongShape("fourspace parameters need four rank-1 projections")
    if any(ps.weight.chi[e] * 2 != ps.weight.chi0 for e in p.elements):
        raise WrongShape("weight must be proportional to (2; 1, 1, 1, 1)")
    report = orthoscalar_check(ps, tol)
    if not report.passed:
        raise CheckFailed(f"system is not orthoscalar at {tol:.0e}: {report.as_dict()}")
    e1, e2, e3, e4 = p.elements
    p1 = ps.projections[e1]
    return (
        float(np.trace(p1 @ ps.projections[e4]).real),
        float(np.trace(p1 @ ps.projections[e3]).real),
        float(np.trace(p1 @ ps.projections[e2]).real),
    )
