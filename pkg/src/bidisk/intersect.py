"""Resultants and boundary intersection multiplicities.

The resultant of a polynomial and its reflection (taken in the inner
variable) is the workhorse: its roots on the unit circle locate common
boundary zeros, their multiplicities count them line by line, and a shear
substitution splits a line's count into per-point intersection
multiplicities.  Saturation means the circle carries the maximal count
2*n1*n2 of common zeros.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from .scalars import QQi, is_exact_array, to_complex_array
from .poly import BiPoly, UniPoly, reflect, shear, check_torus_point


class DegenerateError(ValueError):
    """The polynomial and its reflection share a factor (resultant vanishes)."""


class InconclusiveError(RuntimeError):
    """The computation could not be settled within configured resolution."""


# -- Sylvester matrix and resultant ------------------------------------------

def w_coefficient_rows(p: BiPoly):
    """Coefficient polynomials in the outer variable: p = sum_j p_j(z) w^j."""
    n1, n2 = p.bidegree
    return [UniPoly(p.coeffs[:, j].copy()) for j in range(n2 + 1)]


def reflected_rows(p: BiPoly):
    """Rows of the reflection: z^n1 * conj(p_j(1/conj(z))) for each row."""
    n1, _ = p.bidegree
    return [row.reflect(n1) for row in w_coefficient_rows(p)]


def sylvester_value(p: BiPoly, z) -> np.ndarray:
    """The 2m x 2m Sylvester matrix of (p, reflect(p)) in w, evaluated at z."""
    n1, m = p.bidegree
    rows = w_coefficient_rows(p)
    refl = reflected_rows(p)
    exact = p.exact and isinstance(z, QQi)
    out = np.zeros((2 * m, 2 * m), dtype=object if exact else complex)
    if exact:
        out[:] = QQi(0)
    pv = [r(z) for r in rows]            # w-coeffs of p:        p_0 .. p_m
    qv = [refl[m - j](z) for j in range(m + 1)]  # w-coeffs of p~: p~_m .. p~_0
    for i in range(m):
        for j in range(m + 1):
            out[i, i + j] = pv[j]
            out[m + i, i + j] = qv[j]
    return out


def _det_exact(mat: np.ndarray) -> QQi:
    m = np.array(mat, dtype=object)
    n = m.shape[0]
    det = QQi(1)
    for col in range(n):
        piv = None
        best = None
        for r in range(col, n):
            v = m[r, col]
            if bool(v):
                a = v.abs2()
                if best is None or a > best:
                    best, piv = a, r
        if piv is None:
            return QQi(0)
        if piv != col:
            m[[col, piv]] = m[[piv, col]]
            det = -det
        det = det * m[col, col]
        inv = QQi(1) / m[col, col]
        for r in range(col + 1, n):
            f = m[r, col] * inv
            if bool(f):
                for c in range(col, n):
                    m[r, c] = m[r, c] - f * m[col, c]
    return det


def resultant_in_w(p: BiPoly, bidegree=None) -> UniPoly:
    """Resultant of p and its reflection with respect to the inner variable.

    Computed by determinant evaluation at interpolation nodes followed by
    coefficient recovery: roots of unity with an inverse FFT in the numeric
    backend, small integer nodes with exact Lagrange interpolation in the
    rational backend.
    """
    if bidegree is not None:
        p = p.pad(bidegree)
    n1, m = p.bidegree
    if m == 0:
        one = QQi(1) if p.exact else 1.0 + 0j
        return UniPoly(np.array([one], dtype=object if p.exact else complex))
    deg = 2 * n1 * m
    if p.exact:
        nodes = []
        k = 0
        while len(nodes) < deg + 1:
            nodes.append(QQi(k))
            if k > 0:
                nodes.append(QQi(-k))
            k += 1
        nodes = nodes[: deg + 1]
        vals = [_det_exact(sylvester_value(p, t)) for t in nodes]
        return _lagrange_exact(nodes, vals)
    count = deg + 1
    ks = np.arange(count)
    nodes = np.exp(2j * np.pi * ks / count)
    vals = np.array([np.linalg.det(sylvester_value(p, t)) for t in nodes])
    coeffs = np.fft.fft(vals) / count
    return UniPoly(coeffs)


def _lagrange_exact(nodes, vals) -> UniPoly:
    n = len(nodes)
    acc = [QQi(0)] * n
    for i in range(n):
        # basis polynomial prod_{j != i} (z - x_j) / (x_i - x_j)
        basis = [QQi(1)]
        denom = QQi(1)
        for j in range(n):
            if j == i:
                continue
            new = [QQi(0)] * (len(basis) + 1)
            for k, c in enumerate(basis):
                new[k] = new[k] - c * nodes[j]
                new[k + 1] = new[k + 1] + c
            basis = new
            denom = denom * (nodes[i] - nodes[j])
        w = vals[i] / denom
        for k, c in enumerate(basis):
            acc[k] = acc[k] + w * c
    return UniPoly(np.array(acc, dtype=object))


# -- root multiplicities -------------------------------------------------------

def exact_root_multiplicity(r: UniPoly, zeta: QQi) -> int:
    """Multiplicity of an exactly representable root by repeated division."""
    coeffs = list(r.to_exact().coeffs)
    mult = 0
    while len(coeffs) > 1 or (coeffs and bool(coeffs[0])):
        # synthetic division by (z - zeta)
        rev = coeffs[::-1]
        out = [rev[0]]
        for c in rev[1:]:
            out.append(c + out[-1] * zeta)
        remainder = out[-1]
        if bool(remainder):
            break
        coeffs = out[:-1][::-1]
        mult += 1
        if not coeffs:
            break
    return mult


def numeric_root_multiplicity(r: UniPoly, z0: complex, noise_rel: float = 1e-8) -> int:
    """Order of vanishing at z0 from the scaled derivative pattern."""
    r = r.to_numeric()
    scale = max(r.coeff_scale(), 1e-300)
    ds = []
    cur = r
    for j in range(r.degree + 1):
        ds.append(abs(cur(z0)) / factorial(j))
        cur = cur.derivative()
    thr = noise_rel * max(scale, max(ds) if ds else 1.0)
    for j, v in enumerate(ds):
        if v > thr:
            return j
    return len(ds)


def _refine_root(r: UniPoly, z0: complex, mult: int, steps: int = 40) -> complex:
    """Newton refinement of a multiplicity-`mult` root via the (mult-1) derivative."""
    g = r.to_numeric()
    for _ in range(mult - 1):
        g = g.derivative()
    gp = g.derivative()
    z = complex(z0)
    for _ in range(steps):
        d = gp(z)
        if abs(d) == 0:
            break
        step = g(z) / d
        z -= step
        if abs(step) < 1e-15 * max(1.0, abs(z)):
            break
    return z


def circle_roots(r: UniPoly, shell: float = 5e-3, join: float = 2e-3,
                 snap: float = 1e-6):
    """Roots of r on the unit circle with multiplicities.

    Companion-matrix eigenvalues scatter around a k-fold root with radius on
    the order of eps**(1/k), so candidates are clustered by proximity first;
    the cluster centroid (accurate to second order) is Newton-refined and the
    multiplicity is cross-checked against the order of vanishing there.
    """
    rn = r.to_numeric()
    roots = rn.roots()
    cand = [z for z in roots if abs(abs(z) - 1.0) < shell]
    if not cand:
        return []
    cand.sort(key=lambda z: np.angle(z))
    clusters = [[cand[0]]]
    for z in cand[1:]:
        if abs(z - clusters[-1][-1]) < join or abs(z - clusters[-1][0]) < join:
            clusters[-1].append(z)
        else:
            clusters.append([z])
    # circle wrap-around
    if len(clusters) > 1 and abs(clusters[0][0] - clusters[-1][-1]) < join:
        clusters[0] = clusters.pop() + clusters[0]

    found = []
    for cl in clusters:
        k = len(cl)
        centroid = sum(cl) / k
        z0 = _refine_root(rn, centroid, k)
        if abs(abs(z0) - 1.0) > snap:
            continue
        z0 = z0 / abs(z0)
        for nice in (1.0, -1.0, 1j, -1j):
            if abs(z0 - nice) < snap:
                z0 = nice
                break
        if r.exact and isinstance(z0, (int, float, complex)) and \
                z0 in (1.0, -1.0, 1j, -1j):
            mult = exact_root_multiplicity(r, QQi.from_complex(complex(z0)))
        else:
            mult = numeric_root_multiplicity(rn, z0)
        if mult != k:
            # cluster grouping disagreed with the analytic order; retry tighter
            if join > 1e-9:
                return circle_roots(r, shell=shell, join=join / 8, snap=snap)
            raise InconclusiveError(
                f"cannot settle multiplicity near {z0}: cluster {k} vs order {mult}")
        if mult > 0:
            found.append((complex(z0), int(mult)))
    return found


# -- certificates ---------------------------------------------------------------

@dataclass(frozen=True)
class ResultantData:
    """Resultant of (p, reflect(p)) in the inner variable with circle roots."""

    r: UniPoly
    circle_roots: tuple
    total_circle_multiplicity: int


@dataclass(frozen=True)
class SaturationCertificate:
    saturated: bool
    count: int
    required: int
    per_point: tuple  # ((z, w), multiplicity)

    def to_json_dict(self):
        return {
            "saturated": self.saturated,
            "count": self.count,
            "required": self.required,
            "per_point": [
                {"point": [[complex(z).real, complex(z).imag],
                           [complex(w).real, complex(w).imag]],
                 "multiplicity": m}
                for (z, w), m in self.per_point
            ],
        }


def _is_zero_poly(r: UniPoly, rel: float = 1e-12) -> bool:
    if r.exact:
        return all(not bool(c) for c in r.coeffs)
    mags = np.abs(r.coeffs)
    return bool(mags.max(initial=0.0) <= rel * max(1.0, mags.sum()))


def resultant_inner(p: BiPoly, check_identity: bool = True) -> ResultantData:
    """Resultant data for (p, reflect(p)); raises on a shared factor.

    The determinant identity r(z) = z^(n*m) det(P*P - Q*Q) is spot-checked on
    circle samples against the Schur-Cohn form as a self-test.
    """
    p = p.trim(1e-14) if not p.exact else p.trim()
    n1, m = p.bidegree
    r = resultant_in_w(p)
    if _is_zero_poly(r):
        raise DegenerateError("resultant vanishes identically: shared factor")
    if check_identity and m >= 1:
        from .stability import schur_cohn_form  # deferred import, avoids cycle
        T = schur_cohn_form(p.to_numeric())
        zs = np.exp(2j * np.pi * np.arange(32) / 32)
        tv = T.eval_batch(zs)
        dets = np.linalg.det(tv)
        rn = r.to_numeric()
        lhs = np.array([rn(z) for z in zs])
        rhs = zs ** (n1 * m) * dets
        scale = max(1.0, float(np.max(np.abs(lhs))))
        if np.max(np.abs(lhs - rhs)) > 1e-6 * scale:
            raise InconclusiveError("resultant / Schur-Cohn determinant mismatch")
    roots = circle_roots(r)
    total = sum(mult for _, mult in roots)
    return ResultantData(r=r, circle_roots=tuple(roots),
                         total_circle_multiplicity=total)


def _torus_zeros_on_line(p: BiPoly, z0, tol: float = 1e-6):
    """Common torus zeros of (p, reflect(p)) with first coordinate z0."""
    pn = p.to_numeric()
    n = pn.bidegree
    pt = reflect(pn, n)
    fiber = UniPoly(pn.coeffs.T.copy() @ np.array(
        [complex(z0) ** i for i in range(n[0] + 1)]))
    scale = max(1.0, pn.coeff_scale())
    roots = fiber.roots()
    pts = []
    for w in roots:
        if abs(abs(w) - 1.0) > 5e-4:
            continue
        w = w / abs(w)
        if abs(pt(complex(z0), w)) <= 1e-5 * scale and abs(pn(complex(z0), w)) <= 1e-5 * scale:
            pts.append(w)
    pts.sort(key=lambda w: np.angle(w))
    merged = []
    for w in pts:
        if merged and abs(w - merged[-1]) < 1e-5:
            continue
        merged.append(w)
    snapped = []
    for w in merged:
        for nice in (1.0, -1.0, 1j, -1j):
            if abs(w - nice) < 1e-6:
                w = nice
                break
        snapped.append(complex(w))
    return snapped


def line_multiplicity(p: BiPoly, v: BiPoly | None, z0) -> int:
    """Multiplicity of z0 as a resultant root of (p+v, reflect(p)+v).

    Counts the common zeros of the perturbed pair on the vertical line
    through z0, with multiplicity.
    """
    q = p if v is None else p + v
    r = resultant_in_w(q, bidegree=q.bidegree)
    if _is_zero_poly(r):
        raise DegenerateError("resultant vanishes identically")
    if q.exact and isinstance(z0, QQi):
        return exact_root_multiplicity(r, z0)
    if q.exact and complex(z0) in (1.0, -1.0, 1j, -1j):
        return exact_root_multiplicity(r, QQi.from_complex(complex(z0)))
    return numeric_root_multiplicity(r, complex(z0))


def _rotate(p: BiPoly, zeta) -> BiPoly:
    """p(z1*zeta1, z2*zeta2); exact when both p and zeta are exact."""
    z1, z2 = zeta
    exact = p.exact and isinstance(z1, QQi) and isinstance(z2, QQi)
    if not exact:
        p = p.to_numeric()
        z1, z2 = complex(z1), complex(z2)
    n1, n2 = p.bidegree
    out = np.zeros((n1 + 1, n2 + 1), dtype=object if exact else complex)
    if exact:
        out[:] = QQi(0)
    for i in range(n1 + 1):
        p1 = z1 ** i
        for j in range(n2 + 1):
            out[i, j] = p.coeffs[i, j] * p1 * (z2 ** j)
    return BiPoly(out)


def point_multiplicity(p: BiPoly, zeta, k_max: int | None = None) -> int:
    """Intersection multiplicity of (p, reflect(p)) at a common torus zero.

    The point is rotated to (1, 1); a shear exponent k is then chosen so that
    (1, 1) is the only common zero of the sheared pair on the line z = 1, at
    which point the line count at z = 1 is exactly the local multiplicity.
    Returns 0 when zeta is not a common zero.  Raises InconclusiveError when
    no separating exponent exists below the cutoff.
    """
    check_torus_point(tuple(complex(c) for c in zeta), tol=1e-8)
    n = p.bidegree
    pn = p.to_numeric()
    scale = max(1.0, pn.coeff_scale())
    z1c, z2c = complex(zeta[0]), complex(zeta[1])
    if abs(pn(z1c, z2c)) > 1e-6 * scale or \
            abs(reflect(pn, n)(z1c, z2c)) > 1e-6 * scale:
        return 0
    conj_zeta = (_conj_point(zeta[0]), _conj_point(zeta[1]))
    q = _rotate(p, conj_zeta)
    k_cap = (2 * n[0] * n[1] + 4) if k_max is None else k_max
    for k in range(0, k_cap + 1):
        qk = shear(q, k)
        others = [w for w in _torus_zeros_on_line(qk, 1.0) if abs(w - 1.0) > 1e-6]
        if others:
            continue
        return line_multiplicity(qk, None, _one_like(qk))
    raise InconclusiveError(
        f"no separating shear exponent up to {k_cap} for point {zeta!r}")


def _conj_point(z):
    if isinstance(z, QQi):
        return z.conjugate()
    return np.conj(complex(z))


def _one_like(p: BiPoly):
    return QQi(1) if p.exact else 1.0


def is_saturated(p: BiPoly) -> SaturationCertificate:
    """Certify whether the circle carries the maximal common-zero count.

    The required count is 2*n1*n2 at the polynomial's attained bidegree; the
    per-point breakdown attaches an intersection multiplicity to every common
    torus zero, and its line sums are cross-checked against the resultant.
    """
    p = p.trim(1e-14) if not p.exact else p.trim()
    n1, n2 = p.bidegree
    data = resultant_inner(p)
    required = 2 * n1 * n2
    per_point = []
    for z0, line_count in data.circle_roots:
        ws = _torus_zeros_on_line(p, z0)
        if len(ws) == 1:
            per_point.append(((z0, ws[0]), line_count))
            continue
        mults = []
        for w in ws:
            mults.append(point_multiplicity(p, (z0, w)))
        if sum(mults) != line_count:
            raise InconclusiveError(
                f"per-point multiplicities {mults} disagree with line count "
                f"{line_count} at z0={z0!r}")
        per_point.extend((((z0, w), m) for w, m in zip(ws, mults) if m > 0))
    count = data.total_circle_multiplicity
    return SaturationCertificate(saturated=(count == required), count=count,
                                 required=required, per_point=tuple(per_point))


def torus_common_zero_count(p: BiPoly) -> int:
    """Total number of common zeros of (p, reflect(p)) on the torus."""
    return resultant_inner(p, check_identity=False).total_circle_multiplicity
