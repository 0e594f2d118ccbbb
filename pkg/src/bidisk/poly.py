"""Bivariate and univariate polynomial arithmetic over a dual scalar backend.

A :class:`BiPoly` is a dense coefficient matrix indexed by powers of the two
variables; entry ``(i, j)`` multiplies ``z1**i * z2**j``.  The bidegree is
declared by the array shape and bounds the support (trailing rows/columns may
be zero), so a polynomial of "multidegree at most n" keeps its declared n.
Reflection always happens at a declared bidegree.

Coefficients are either ``complex128`` (default) or exact Gaussian rationals
(:class:`~bidisk.scalars.QQi` in an object array).  Every operation here is a
pure function of immutable values.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from .scalars import QQi, conj_s, abs2_s, is_exact_array, exact_array, to_complex_array

TORUS_TOL = 1e-10


class DegreeError(ValueError):
    """Requested degree does not bound the polynomial's support."""


class DomainError(ValueError):
    """An input point lies outside the required domain (e.g. off the torus)."""


def _as_coeff_array(coeffs, exact: bool) -> np.ndarray:
    if exact:
        return exact_array(coeffs)
    return np.array(coeffs, dtype=complex)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class BiPoly:
    """Bivariate polynomial with declared bidegree ``coeffs.shape - (1, 1)``."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = self.coeffs
        if arr.ndim != 2:
            raise ValueError("coefficient array must be 2-D")
        if not is_exact_array(arr):
            arr = np.ascontiguousarray(arr, dtype=complex)
            if not np.all(np.isfinite(arr.view(float))):
                raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coeffs", _freeze(arr.copy()))

    # -- constructors -------------------------------------------------------
    @staticmethod
    def from_coeffs(coeffs, exact: bool = False) -> "BiPoly":
        return BiPoly(_as_coeff_array(coeffs, exact))

    @staticmethod
    def from_dict(entries: dict, bidegree=None, exact: bool = False) -> "BiPoly":
        """Build from ``{(i, j): coefficient}``; shape from bidegree or support."""
        if bidegree is None:
            n1 = max(i for i, _ in entries)
            n2 = max(j for _, j in entries)
        else:
            n1, n2 = bidegree
        out = np.zeros((n1 + 1, n2 + 1), dtype=object if exact else complex)
        if exact:
            out[:] = QQi(0)
        for (i, j), c in entries.items():
            out[i, j] = c if (exact and isinstance(c, QQi)) else \
                (QQi.from_complex(complex(c)) if exact else complex(c))
        return BiPoly(out)

    @staticmethod
    def zero(bidegree=(0, 0), exact: bool = False) -> "BiPoly":
        return BiPoly.from_dict({}, bidegree=bidegree, exact=exact)

    # -- basic properties ----------------------------------------------------
    @property
    def bidegree(self) -> tuple[int, int]:
        return (self.coeffs.shape[0] - 1, self.coeffs.shape[1] - 1)

    @property
    def exact(self) -> bool:
        return is_exact_array(self.coeffs)

    def coeff_scale(self) -> float:
        c = to_complex_array(self.coeffs)
        return float(np.sum(np.abs(c)))

    def is_zero(self, tol: float = 0.0) -> bool:
        if self.exact:
            return not any(bool(c) for c in self.coeffs.ravel())
        return bool(np.all(np.abs(self.coeffs) <= tol * max(1.0, self.coeff_scale())))

    def support_degree(self, tol: float = 0.0) -> tuple[int, int]:
        """Actual multidegree: largest (i, j) with a nonzero coefficient."""
        if self.exact:
            mask = np.array([[bool(c) for c in row] for row in self.coeffs])
        else:
            thr = tol * max(1.0, self.coeff_scale())
            mask = np.abs(self.coeffs) > thr
        if not mask.any():
            return (0, 0)
        rows = np.where(mask.any(axis=1))[0]
        cols = np.where(mask.any(axis=0))[0]
        return (int(rows[-1]), int(cols[-1]))

    def trim(self, tol: float = 0.0) -> "BiPoly":
        """Shrink the declared bidegree to the actual support."""
        d1, d2 = self.support_degree(tol)
        return BiPoly(self.coeffs[: d1 + 1, : d2 + 1])

    def pad(self, bidegree) -> "BiPoly":
        n1, n2 = bidegree
        d1, d2 = self.bidegree
        if n1 < d1 or n2 < d2:
            raise DegreeError("padding target below declared bidegree")
        out = np.zeros((n1 + 1, n2 + 1), dtype=self.coeffs.dtype)
        if self.exact:
            out[:] = QQi(0)
        out[: d1 + 1, : d2 + 1] = self.coeffs
        return BiPoly(out)

    # -- backend conversion ---------------------------------------------------
    def to_exact(self) -> "BiPoly":
        if self.exact:
            return self
        return BiPoly(exact_array(self.coeffs))

    def to_numeric(self) -> "BiPoly":
        if not self.exact:
            return self
        return BiPoly(to_complex_array(self.coeffs))

    # -- arithmetic -------------------------------------------------------------
    def _binary_shape(self, other: "BiPoly"):
        n1 = max(self.bidegree[0], other.bidegree[0])
        n2 = max(self.bidegree[1], other.bidegree[1])
        return (n1, n2)

    def __add__(self, other):
        if not isinstance(other, BiPoly):
            return NotImplemented
        n = self._binary_shape(other)
        a, b = self.pad(n), other.pad(n)
        return BiPoly(a.coeffs + b.coeffs)

    def __sub__(self, other):
        if not isinstance(other, BiPoly):
            return NotImplemented
        n = self._binary_shape(other)
        a, b = self.pad(n), other.pad(n)
        return BiPoly(a.coeffs - b.coeffs)

    def __neg__(self):
        return BiPoly(-self.coeffs if not self.exact else
                      np.array([[-c for c in row] for row in self.coeffs], dtype=object))

    def scale(self, c) -> "BiPoly":
        if self.exact:
            cq = c if isinstance(c, QQi) else QQi.from_complex(complex(c))
            out = np.array([[cq * x for x in row] for row in self.coeffs], dtype=object)
            return BiPoly(out)
        return BiPoly(self.coeffs * complex(c))

    def __mul__(self, other):
        if isinstance(other, BiPoly):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, BiPoly):
            return NotImplemented
        a, b = self.trim(), other.trim()
        if a.coeffs.shape != b.coeffs.shape:
            return False
        if a.exact or b.exact:
            return all(x == y for x, y in
                       zip(a.to_exact().coeffs.ravel(), b.to_exact().coeffs.ravel()))
        return bool(np.array_equal(a.coeffs, b.coeffs))

    def __hash__(self):
        t = self.trim()
        if t.exact:
            return hash((t.coeffs.shape, tuple(t.coeffs.ravel())))
        return hash((t.coeffs.shape, tuple(t.coeffs.ravel().tolist())))

    # -- evaluation ----------------------------------------------------------
    def __call__(self, z1, z2):
        """Horner evaluation; exact when both backend and point are exact."""
        rows = self.coeffs
        acc = None
        for i in range(rows.shape[0] - 1, -1, -1):
            row = rows[i]
            r = row[-1]
            for j in range(rows.shape[1] - 2, -1, -1):
                r = r * z2 + row[j]
            acc = r if acc is None else acc * z1 + r
        return acc

    def transpose(self) -> "BiPoly":
        """Swap the two variable roles."""
        return BiPoly(self.coeffs.T.copy())

    def conj_coeffs(self) -> "BiPoly":
        if self.exact:
            out = np.array([[c.conjugate() for c in row] for row in self.coeffs],
                           dtype=object)
            return BiPoly(out)
        return BiPoly(np.conj(self.coeffs))

    # -- JSON contract ---------------------------------------------------------
    def to_json_dict(self) -> dict:
        n1, n2 = self.bidegree
        if self.exact:
            coeffs = [[self.coeffs[i, j].to_json() for j in range(n2 + 1)]
                      for i in range(n1 + 1)]
        else:
            coeffs = [[[self.coeffs[i, j].real, self.coeffs[i, j].imag]
                       for j in range(n2 + 1)] for i in range(n1 + 1)]
        return {"bidegree": [n1, n2], "coeffs": coeffs}

    @staticmethod
    def from_json_dict(d: dict, exact: bool = False) -> "BiPoly":
        n1, n2 = d["bidegree"]
        rows = d["coeffs"]
        if len(rows) != n1 + 1 or any(len(r) != n2 + 1 for r in rows):
            raise ValueError("coeffs shape disagrees with declared bidegree")
        if exact or any(isinstance(v, str) for row in rows for pair in row for v in pair):
            out = np.empty((n1 + 1, n2 + 1), dtype=object)
            for i in range(n1 + 1):
                for j in range(n2 + 1):
                    out[i, j] = QQi.from_json(rows[i][j])
            return BiPoly(out)
        out = np.array([[complex(pair[0], pair[1]) for pair in row] for row in rows])
        return BiPoly(out)

    def __repr__(self):
        terms = []
        arr = self.coeffs
        for i in range(arr.shape[0]):
            for j in range(arr.shape[1]):
                c = arr[i, j]
                if (bool(c) if self.exact else c != 0):
                    mono = "".join(s for s, k in (("z1", i), ("z2", j)) if k) or ""
                    pw = (f"z1^{i}" if i > 1 else "z1" if i == 1 else "") + \
                         (f"*z2^{j}" if j > 1 else "*z2" if j == 1 else "")
                    pw = pw.lstrip("*")
                    cval = c if self.exact else complex(c)
                    terms.append(f"({cval}){'*' + pw if pw else ''}")
        body = " + ".join(terms) if terms else "0"
        return f"BiPoly[{self.bidegree}]({body})"


@dataclass(frozen=True)
class UniPoly:
    """Univariate polynomial, dense coefficients from the constant term up."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = self.coeffs
        if arr.ndim != 1:
            raise ValueError("coefficient array must be 1-D")
        if not is_exact_array(arr):
            arr = np.ascontiguousarray(arr, dtype=complex)
        object.__setattr__(self, "coeffs", _freeze(arr.copy()))

    @staticmethod
    def from_coeffs(coeffs, exact: bool = False) -> "UniPoly":
        return UniPoly(_as_coeff_array(coeffs, exact))

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def exact(self) -> bool:
        return is_exact_array(self.coeffs)

    def coeff_scale(self) -> float:
        return float(np.sum(np.abs(to_complex_array(self.coeffs))))

    def is_zero(self, tol: float = 0.0) -> bool:
        if self.exact:
            return not any(bool(c) for c in self.coeffs)
        return bool(np.all(np.abs(self.coeffs) <= tol * max(1.0, self.coeff_scale())))

    def trim(self, tol: float = 0.0) -> "UniPoly":
        if self.exact:
            nz = [k for k, c in enumerate(self.coeffs) if bool(c)]
        else:
            thr = tol * max(1.0, self.coeff_scale())
            nz = np.where(np.abs(self.coeffs) > thr)[0].tolist()
        d = nz[-1] if nz else 0
        return UniPoly(self.coeffs[: d + 1])

    def __call__(self, z):
        r = self.coeffs[-1]
        for k in range(self.coeffs.shape[0] - 2, -1, -1):
            r = r * z + self.coeffs[k]
        return r

    def __add__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        d = max(self.degree, other.degree)
        out = np.zeros(d + 1, dtype=self.coeffs.dtype)
        if self.exact:
            out[:] = QQi(0)
        out[: self.degree + 1] = out[: self.degree + 1] + self.coeffs
        out[: other.degree + 1] = out[: other.degree + 1] + other.coeffs
        return UniPoly(out)

    def __sub__(self, other):
        return self + UniPoly(np.array([-c for c in other.coeffs],
                                       dtype=other.coeffs.dtype))

    def __mul__(self, other):
        if isinstance(other, UniPoly):
            da, db = self.degree, other.degree
            out = np.zeros(da + db + 1, dtype=object if self.exact else complex)
            if self.exact:
                out[:] = QQi(0)
            for a, ca in enumerate(self.coeffs):
                for b, cb in enumerate(other.coeffs):
                    out[a + b] = out[a + b] + ca * cb
            return UniPoly(out)
        if self.exact:
            cq = other if isinstance(other, QQi) else QQi.from_complex(complex(other))
            return UniPoly(np.array([cq * c for c in self.coeffs], dtype=object))
        return UniPoly(self.coeffs * complex(other))

    __rmul__ = __mul__

    def reflect(self, degree: int | None = None) -> "UniPoly":
        """z**d * conj(self(1/conj(z))) at the declared (or given) degree."""
        d = self.degree if degree is None else degree
        if d < self.degree:
            raise DegreeError("reflection degree below declared degree")
        out = np.zeros(d + 1, dtype=self.coeffs.dtype)
        if self.exact:
            out[:] = QQi(0)
        for k, c in enumerate(self.coeffs):
            out[d - k] = conj_s(c)
        return UniPoly(out)

    def derivative(self) -> "UniPoly":
        if self.degree == 0:
            return UniPoly.from_coeffs([0], exact=self.exact) if not self.exact \
                else UniPoly(exact_array([0]))
        out = np.array([k * self.coeffs[k] for k in range(1, self.degree + 1)],
                       dtype=self.coeffs.dtype)
        return UniPoly(out)

    def roots(self, trim_tol: float = 1e-13) -> np.ndarray:
        """Roots via the companion matrix (numeric backend)."""
        c = to_complex_array(self.trim(trim_tol).coeffs)
        if c.shape[0] <= 1:
            return np.array([], dtype=complex)
        return np.roots(c[::-1])

    def to_numeric(self) -> "UniPoly":
        if not self.exact:
            return self
        return UniPoly(to_complex_array(self.coeffs))

    def to_exact(self) -> "UniPoly":
        if self.exact:
            return self
        return UniPoly(exact_array(self.coeffs))

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        a, b = self.trim(), other.trim()
        if a.coeffs.shape != b.coeffs.shape:
            return False
        if a.exact or b.exact:
            return all(x == y for x, y in
                       zip(a.to_exact().coeffs, b.to_exact().coeffs))
        return bool(np.array_equal(a.coeffs, b.coeffs))

    def __hash__(self):
        t = self.trim()
        return hash(tuple(t.coeffs.tolist() if not t.exact else t.coeffs))


# -- torus helpers -------------------------------------------------------------

def on_torus(z, tol: float = TORUS_TOL) -> bool:
    if isinstance(z, QQi):
        return z.abs2() == 1
    return abs(abs(complex(z)) - 1.0) <= tol


def check_torus_point(zeta, tol: float = TORUS_TOL):
    z1, z2 = zeta
    if not (on_torus(z1, tol) and on_torus(z2, tol)):
        raise DomainError(f"point {zeta!r} is not on the torus (tol={tol})")


# -- core operations -----------------------------------------------------------

def reflect(p: BiPoly, bidegree=None) -> BiPoly:
    """Reflection z1^n1 z2^n2 conj(p(1/conj(z1), 1/conj(z2))) at a declared bidegree.

    Coefficient ``(i, j)`` of the output is the conjugate of coefficient
    ``(n1-i, n2-j)`` of ``p``.  The bidegree must bound the support of ``p``.
    """
    n = p.bidegree if bidegree is None else tuple(bidegree)
    d1, d2 = p.support_degree()
    if n[0] < d1 or n[1] < d2:
        raise DegreeError(f"reflection bidegree {n} below support {(d1, d2)}")
    padded = p.pad(n)
    flipped = padded.coeffs[::-1, ::-1]
    return BiPoly(flipped).conj_coeffs()


def evaluate(p: BiPoly, zeta) -> complex:
    return p(zeta[0], zeta[1])


def slice_poly(p: BiPoly, zeta, tol: float = TORUS_TOL) -> UniPoly:
    """Diagonal slice z -> p(z*zeta1, z*zeta2) for a torus direction zeta."""
    check_torus_point(zeta, tol)
    z1, z2 = zeta
    n1, n2 = p.bidegree
    out = np.zeros(n1 + n2 + 1, dtype=p.coeffs.dtype)
    if p.exact:
        out[:] = QQi(0)
    pow1 = [_power(z1, i) for i in range(n1 + 1)]
    pow2 = [_power(z2, j) for j in range(n2 + 1)]
    for i in range(n1 + 1):
        for j in range(n2 + 1):
            out[i + j] = out[i + j] + p.coeffs[i, j] * pow1[i] * pow2[j]
    return UniPoly(out)


def _power(z, k: int):
    if isinstance(z, QQi):
        return z ** k
    return complex(z) ** k


def shear(p: BiPoly, k: int) -> BiPoly:
    """Substitution (z1, z2) -> (z2^k * z1, z2); bidegree (n1, k*n1 + n2)."""
    if k < 0:
        raise ValueError("shear exponent must be nonnegative")
    n1, n2 = p.bidegree
    out = np.zeros((n1 + 1, k * n1 + n2 + 1), dtype=p.coeffs.dtype)
    if p.exact:
        out[:] = QQi(0)
    for i in range(n1 + 1):
        for j in range(n2 + 1):
            out[i, k * i + j] = out[i, k * i + j] + p.coeffs[i, j]
    return BiPoly(out)


def multiply(p: BiPoly, q: BiPoly) -> BiPoly:
    a1, a2 = p.bidegree
    b1, b2 = q.bidegree
    exact = p.exact or q.exact
    if exact:
        p, q = p.to_exact(), q.to_exact()
    out = np.zeros((a1 + b1 + 1, a2 + b2 + 1), dtype=object if exact else complex)
    if exact:
        out[:] = QQi(0)
    for i in range(a1 + 1):
        for j in range(a2 + 1):
            c = p.coeffs[i, j]
            if not (bool(c) if exact else c != 0):
                continue
            for k in range(b1 + 1):
                for l in range(b2 + 1):
                    out[i + k, j + l] = out[i + k, j + l] + c * q.coeffs[k, l]
    return BiPoly(out)


def linear_combine(terms) -> BiPoly:
    """Sum of (scalar, BiPoly) pairs with exact coefficient arithmetic."""
    terms = list(terms)
    if not terms:
        return BiPoly.zero()
    acc = terms[0][1].scale(terms[0][0])
    for c, q in terms[1:]:
        acc = acc + q.scale(c)
    return acc


def is_symmetric(v: BiPoly, bidegree=None, tol: float = 1e-10) -> bool:
    """True iff the reflection of v at the bidegree equals v coefficientwise."""
    n = v.bidegree if bidegree is None else tuple(bidegree)
    try:
        r = reflect(v, n)
    except DegreeError:
        return False
    vv = v.pad(n)
    if v.exact:
        return all(a == b for a, b in zip(vv.coeffs.ravel(), r.coeffs.ravel()))
    scale = max(1.0, vv.coeff_scale())
    return bool(np.max(np.abs(vv.coeffs - r.to_numeric().coeffs)) <= tol * scale)


@dataclass(frozen=True)
class HomogExpansion:
    """Homogeneous parts of p(zeta1*(1-e1), zeta2*(1-e2)) grouped by total degree.

    ``parts[k]`` is the homogeneous part of total degree ``start + k`` in the
    shift variables; ``parts[0]`` is nonzero.  ``start`` is the vanishing order
    of p at the base point (0 iff p does not vanish there).
    """

    base_point: tuple
    start: int
    parts: tuple = field(default_factory=tuple)

    def part(self, order: int) -> BiPoly:
        k = order - self.start
        if 0 <= k < len(self.parts):
            return self.parts[k]
        ref = self.parts[0] if self.parts else BiPoly.zero()
        return BiPoly.zero(exact=ref.exact)

    def reassemble(self, eta) -> complex:
        """Sum of all parts at a shift point (oracle for the expansion)."""
        total = None
        for q in self.parts:
            val = q(eta[0], eta[1])
            total = val if total is None else total + val
        return total


def homog_expand(p: BiPoly, zeta, tol: float = TORUS_TOL,
                 vanish_tol: float = 1e-10) -> HomogExpansion:
    """Expand p around a torus point in the scaled shift variables.

    Substitutes ``z_i = zeta_i * (1 - e_i)`` and groups the result by total
    degree in ``(e1, e2)``.  The starting order is the least total degree with
    a nonvanishing part, detected exactly in the rational backend and with a
    relative threshold otherwise.
    """
    if p.is_zero():
        raise ValueError("cannot expand the zero polynomial")
    check_torus_point(zeta, tol)
    z1, z2 = zeta
    n1, n2 = p.bidegree
    exact = p.exact and isinstance(z1, QQi) and isinstance(z2, QQi)
    if p.exact and not exact:
        p = p.to_numeric()
        exact = False
    out = np.zeros((n1 + 1, n2 + 1), dtype=object if exact else complex)
    if exact:
        out[:] = QQi(0)
    pow1 = [_power(z1, i) for i in range(n1 + 1)]
    pow2 = [_power(z2, j) for j in range(n2 + 1)]
    for i in range(n1 + 1):
        for j in range(n2 + 1):
            c = p.coeffs[i, j]
            if not (bool(c) if exact else c != 0):
                continue
            w = c * pow1[i] * pow2[j]
            for a in range(i + 1):
                ca = comb(i, a) * ((-1) ** a)
                for b in range(j + 1):
                    cb = comb(j, b) * ((-1) ** b)
                    out[a, b] = out[a, b] + w * (ca * cb)
    full = BiPoly(out)

    scale = max(1.0, full.coeff_scale())
    parts = []
    for d in range(n1 + n2 + 1):
        sel = np.zeros_like(out)
        if exact:
            sel[:] = QQi(0)
        nonzero = False
        for a in range(min(d, n1) + 1):
            b = d - a
            if b > n2:
                continue
            c = out[a, b]
            live = bool(c) if exact else abs(c) > vanish_tol * scale
            if live:
                sel[a, b] = c
                nonzero = True
        parts.append(BiPoly(sel) if nonzero else None)
    start = next((d for d, q in enumerate(parts) if q is not None), None)
    if start is None:
        raise ValueError("polynomial vanished identically under the expansion")
    kept = []
    for d in range(start, n1 + n2 + 1):
        q = parts[d]
        kept.append(q if q is not None else BiPoly.zero((n1, n2), exact=exact))
    while len(kept) > 1 and kept[-1].is_zero():
        kept.pop()
    return HomogExpansion(base_point=(z1, z2), start=start, parts=tuple(kept))


def vanishing_order(p: BiPoly, zeta, **kw) -> int:
    return homog_expand(p, zeta, **kw).start
