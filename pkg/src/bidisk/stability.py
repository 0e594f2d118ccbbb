"""Schur-Cohn machinery on the circle and bidisk stability tests.

For p(z, w) = sum_j p_j(z) w^j of bidegree (n, m), the upper-triangular
Toeplitz matrices P(z) (entries p_j) and Q(z) (entries of the reflected rows,
first row p~_m .. p~_1) give the Schur-Cohn form T_p(z) = P*P - Q*Q.  Its
positivity along the circle encodes zero-freeness of the disk fibers, and a
Lipschitz bound on the eigenvalue motion turns a finite grid check into a
circle-wide certificate.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .scalars import QQi, to_complex_array
from .poly import BiPoly, UniPoly
from .trig import MatTrigPoly
from .intersect import resultant_in_w, _is_zero_poly, DegenerateError


class InputError(ValueError):
    """The input violates a precondition of the requested certification."""


STABLE_CLOSED = "STABLE_CLOSED"
SCATTERING_STABLE = "SCATTERING_STABLE"
UNSTABLE = "UNSTABLE"
DEGENERATE = "DEGENERATE"
UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class SweepResult:
    ok: bool
    margin: float                 # certified lower bound for the smallest eigenvalue
    observed_min: float
    zero_candidates: tuple        # circle points where the bottom eigenvalue dips
    density: int
    certified: bool
    violation: bool = False       # an eigenvalue was observed below the floor


@dataclass(frozen=True)
class StabilityReport:
    verdict: str
    min_eig_margin: float
    boundary_zero_candidates: tuple = ()
    sweep_density: int = 0
    certified: bool = False

    def to_json_dict(self):
        return {
            "verdict": self.verdict,
            "min_eig_margin": self.min_eig_margin,
            "boundary_zero_candidates": [
                [complex(z).real, complex(z).imag] for z in self.boundary_zero_candidates
            ],
            "sweep_density": self.sweep_density,
            "certified": self.certified,
        }


# -- matrix constructions ------------------------------------------------------

def pq_matrices(p: BiPoly) -> tuple[MatTrigPoly, MatTrigPoly]:
    """Upper-triangular Toeplitz pair (P(z), Q(z)) in the inner variable.

    P carries the coefficient rows p_0 .. p_{m-1}; Q carries the reflected
    rows with first row (p~_m, ..., p~_1), where p~_j(z) = z^n conj(p_j(1/conj z)).
    """
    n1, m = p.bidegree
    if m == 0:
        raise InputError("degenerate inner degree; use the scalar test")
    exact = p.exact
    P = np.zeros((n1 + 1, m, m), dtype=object if exact else complex)
    Q = np.zeros((n1 + 1, m, m), dtype=object if exact else complex)
    if exact:
        P[:] = QQi(0)
        Q[:] = QQi(0)
    c = p.coeffs
    for i in range(m):
        for j in range(i, m):
            t = j - i
            for k in range(n1 + 1):
                P[k, i, j] = P[k, i, j] + c[k, t]
                # reflected row index m - t, coefficient of z^k is conj(c[n1-k])
                refl = c[n1 - k, m - t]
                Q[k, i, j] = Q[k, i, j] + (refl.conjugate() if exact else np.conj(refl))
    return MatTrigPoly(P, offset=0), MatTrigPoly(Q, offset=0)


def schur_cohn_form(p: BiPoly) -> MatTrigPoly:
    """Hermitian Laurent form T_p(z) = P(z)*P(z) - Q(z)*Q(z) on the circle."""
    P, Q = pq_matrices(p)
    return (P.adjoint() @ P) - (Q.adjoint() @ Q)


def univariate_schur_cohn(q: UniPoly, margin_rel: float = 1e-12) -> bool:
    """True iff q has no zeros in the closed unit disk.

    Positive definiteness of the constant Schur-Cohn matrix, tested with a
    relative eigenvalue margin; boundary zeros land at zero and fail.
    """
    q = q.to_numeric().trim(1e-14)
    if q.is_zero():
        raise InputError("zero polynomial has no stability verdict")
    m = q.degree
    if m == 0:
        return True
    c = q.coeffs
    P = np.zeros((m, m), dtype=complex)
    Q = np.zeros((m, m), dtype=complex)
    for i in range(m):
        for j in range(i, m):
            P[i, j] = c[j - i]
            Q[i, j] = np.conj(c[m - (j - i)])
    M = P.conj().T @ P - Q.conj().T @ Q
    eigs = np.linalg.eigvalsh(M)
    scale = float(np.sum(np.abs(c)) ** 2)
    return bool(eigs[0] > margin_rel * scale)


# -- certified sweeps ------------------------------------------------------------

def _min_eiged(T: MatTrigPoly, thetas: np.ndarray) -> np.ndarray:
    vals = T.eval_batch(np.exp(1j * thetas))
    vals = 0.5 * (vals + np.conj(np.swapaxes(vals, 1, 2)))
    return np.linalg.eigvalsh(vals)[:, 0]


def certified_psd_sweep(T: MatTrigPoly, mode: str = "strict",
                        base_density: int = 1024,
                        neg_tol: float = 1e-9,
                        zero_thresh: float = 1e-8,
                        min_arc: float = 1e-7,
                        max_evals: int = 400_000) -> SweepResult:
    """Certify positivity of a Hermitian Laurent form along the whole circle.

    The smallest eigenvalue moves at most L per unit arc (L from the
    coefficient norms), so an interval with endpoint values a, b is settled
    once min(a, b) - L*width/2 clears the target; unsettled intervals are
    bisected.  In semidefinite mode the target is a small negative floor and
    the dips below the zero-detection threshold are returned as candidate
    boundary zeros.
    """
    T = T.to_numeric()
    scale = T.coeff_scale()
    L = T.lipschitz_bound() + 1e-300
    deg = max(abs(T.offset), abs(T.offset + T.coeffs.shape[0] - 1), 1)
    density = max(base_density, 64 * deg)
    thetas = np.linspace(0.0, 2 * np.pi, density, endpoint=False)
    vals = _min_eiged(T, thetas)
    observed = float(vals.min())
    evals = density

    target = 0.0 if mode == "strict" else -neg_tol * scale
    hard_floor = -10 * neg_tol * scale  # early reject once clearly negative
    certified_floor = np.inf
    # intervals as (theta_a, theta_b, val_a, val_b), wrap-around included
    h = 2 * np.pi / density
    starts = thetas
    ends = np.concatenate([thetas[1:], [2 * np.pi]])
    va = vals
    vb = np.concatenate([vals[1:], [vals[0]]])
    pend = [(float(a), float(b), float(x), float(y))
            for a, b, x, y in zip(starts, ends, va, vb)]
    zero_hits = [float(t) for t, v in zip(thetas, vals) if v < zero_thresh * scale]

    while pend and evals < max_evals:
        batch = pend
        pend = []
        mids = np.array([(a + b) / 2 for a, b, _, _ in batch])
        vm = _min_eiged(T, mids)
        evals += len(mids)
        observed = min(observed, float(vm.min()))
        if mode != "strict" and observed < hard_floor:
            return SweepResult(ok=False, margin=observed, observed_min=observed,
                               zero_candidates=(), density=evals, certified=False,
                               violation=True)
        for (a, b, x, y), tm, v in zip(batch, mids, vm):
            v = float(v)
            if v < zero_thresh * scale:
                zero_hits.append(float(tm))
            for (lo, hi, vlo, vhi) in ((a, tm, x, v), (tm, b, v, y)):
                width = hi - lo
                bound = min(vlo, vhi) - L * width / 2
                if bound >= target:
                    certified_floor = min(certified_floor, bound)
                elif width <= min_arc:
                    certified_floor = min(certified_floor, bound)
                else:
                    pend.append((lo, hi, vlo, vhi))
        if mode == "strict" and observed <= 0:
            break

    exhausted = bool(pend)
    for (lo, hi, vlo, vhi) in pend:
        certified_floor = min(certified_floor, min(vlo, vhi) - L * (hi - lo) / 2)
    certified_floor = float(min(certified_floor, observed))

    candidates = _cluster_circle_points(zero_hits)
    if mode == "strict":
        ok = certified_floor > 0
        return SweepResult(ok=ok, margin=certified_floor, observed_min=observed,
                           zero_candidates=candidates, density=evals,
                           certified=not exhausted, violation=observed <= 0)
    floor_allow = -max(10 * neg_tol * scale, 2 * L * min_arc)
    violation = observed < -neg_tol * scale
    ok = (not violation) and (certified_floor >= floor_allow)
    return SweepResult(ok=ok, margin=certified_floor, observed_min=observed,
                       zero_candidates=candidates, density=evals,
                       certified=not exhausted, violation=violation)


def _cluster_circle_points(thetas, gap: float = 1e-2):
    if not thetas:
        return ()
    thetas = sorted(thetas)
    groups = [[thetas[0]]]
    for t in thetas[1:]:
        if t - groups[-1][-1] < gap:
            groups[-1].append(t)
        else:
            groups.append([t])
    if len(groups) > 1 and (groups[0][0] + 2 * np.pi) - groups[-1][-1] < gap:
        groups[0] = [t - 2 * np.pi for t in groups.pop()] + groups[0]
    out = []
    for g in groups:
        t = float(np.mean(g))
        z = np.exp(1j * t)
        for nice in (1.0, -1.0, 1j, -1j):
            if abs(z - nice) < 1e-6:
                z = nice
                break
        out.append(complex(z))
    return tuple(out)


# -- full verdicts ----------------------------------------------------------------

def _univariate_in_z(p: BiPoly) -> UniPoly:
    return UniPoly(p.coeffs[:, 0].copy())


def _fiber_at_w(p: BiPoly, w0: complex) -> UniPoly:
    c = to_complex_array(p.coeffs)
    pw = np.array([w0 ** j for j in range(c.shape[1])])
    return UniPoly(c @ pw)


def _boundary_points_from_candidates(p: BiPoly, zs) -> tuple:
    from .intersect import _torus_zeros_on_line
    pts = []
    for z0 in zs:
        for w in _torus_zeros_on_line(p, z0):
            pts.append((complex(z0), complex(w)))
    return tuple(pts)


def stable_closed(p: BiPoly, **sweep_kw) -> StabilityReport:
    """No zeros anywhere on the closed bidisk (two-step test).

    The fiber over w = 0 must pass the univariate closed-disk test and the
    Schur-Cohn form must be certified positive definite on the whole circle.
    """
    p = p.to_numeric().trim(1e-14)
    if p.is_zero():
        raise InputError("zero polynomial")
    n1, m = p.bidegree
    if m == 0:
        ok = univariate_schur_cohn(_univariate_in_z(p))
        return StabilityReport(verdict=STABLE_CLOSED if ok else UNSTABLE,
                               min_eig_margin=float("inf") if ok else float("-inf"),
                               certified=True)
    if not univariate_schur_cohn(_fiber_at_w(p, 0.0)):
        return StabilityReport(verdict=UNSTABLE, min_eig_margin=float("-inf"),
                               certified=True)
    sw = certified_psd_sweep(schur_cohn_form(p), mode="strict", **sweep_kw)
    if sw.ok:
        verdict = STABLE_CLOSED
    elif sw.violation:
        verdict = UNSTABLE
    else:
        verdict = UNKNOWN
    return StabilityReport(verdict=verdict, min_eig_margin=sw.margin,
                           boundary_zero_candidates=(), sweep_density=sw.density,
                           certified=sw.certified)


def _one_sided_scattering(p: BiPoly, rng: np.random.Generator, **sweep_kw):
    """Pipeline for one variable ordering: sweep, resultant, inner-fiber count."""
    n1, m = p.bidegree
    if m == 0:
        ok = univariate_schur_cohn(_univariate_in_z(p))
        report = StabilityReport(verdict=SCATTERING_STABLE if ok else UNSTABLE,
                                 min_eig_margin=float("inf") if ok else float("-inf"),
                                 certified=True)
        return report
    T = schur_cohn_form(p)
    sw = certified_psd_sweep(T, mode="semidefinite", **sweep_kw)
    if not sw.ok:
        verdict = UNSTABLE if sw.violation else UNKNOWN
        return StabilityReport(verdict=verdict, min_eig_margin=sw.margin,
                               boundary_zero_candidates=(),
                               sweep_density=sw.density, certified=sw.certified)
    r = resultant_in_w(p)
    if _is_zero_poly(r):
        return StabilityReport(verdict=DEGENERATE, min_eig_margin=sw.margin,
                               sweep_density=sw.density, certified=sw.certified)
    fiber = _fiber_at_w(p, 0.0).trim(1e-14)
    tries = 0
    while fiber.is_zero(1e-13) and tries < 4:
        w0 = 0.5 * np.exp(2j * np.pi * rng.uniform())
        fiber = _fiber_at_w(p, w0).trim(1e-14)
        tries += 1
    if fiber.is_zero(1e-13):
        return StabilityReport(verdict=UNSTABLE, min_eig_margin=sw.margin,
                               sweep_density=sw.density, certified=sw.certified)
    if not univariate_schur_cohn(fiber):
        return StabilityReport(verdict=UNSTABLE, min_eig_margin=sw.margin,
                               sweep_density=sw.density, certified=sw.certified)
    pts = _boundary_points_from_candidates(p, sw.zero_candidates)
    return StabilityReport(verdict=SCATTERING_STABLE, min_eig_margin=sw.margin,
                           boundary_zero_candidates=pts,
                           sweep_density=sw.density, certified=sw.certified)


def scattering_stable(p: BiPoly, seed: int = 0, **sweep_kw) -> StabilityReport:
    """Certify scattering stability at the polynomial's attained multidegree.

    Requires: no zeros on the open bidisk, and no factor shared with the
    reflection.  The test runs with both variable orderings and the verdicts
    must agree; disagreement is reported as DEGENERATE.
    """
    p = p.to_numeric().trim(1e-12)
    if p.is_zero():
        raise InputError("zero polynomial")
    if p.bidegree == (0, 0):
        return StabilityReport(verdict=SCATTERING_STABLE,
                               min_eig_margin=float("inf"), certified=True)
    rng = np.random.default_rng(seed)
    a = _one_sided_scattering(p, rng, **sweep_kw)
    if a.verdict != SCATTERING_STABLE:
        return a
    b = _one_sided_scattering(p.transpose(), rng, **sweep_kw)
    if b.verdict != SCATTERING_STABLE:
        if b.verdict == UNSTABLE and a.verdict == SCATTERING_STABLE:
            return StabilityReport(verdict=DEGENERATE,
                                   min_eig_margin=min(a.min_eig_margin, b.min_eig_margin),
                                   sweep_density=a.sweep_density + b.sweep_density,
                                   certified=a.certified and b.certified)
        return b
    return StabilityReport(verdict=SCATTERING_STABLE,
                           min_eig_margin=min(a.min_eig_margin, b.min_eig_margin),
                           boundary_zero_candidates=a.boundary_zero_candidates,
                           sweep_density=a.sweep_density + b.sweep_density,
                           certified=a.certified and b.certified)


def is_scattering_stable(p: BiPoly, **kw) -> bool:
    return scattering_stable(p, **kw).verdict == SCATTERING_STABLE
