"""Matrix-valued Laurent polynomials on the unit circle.

A :class:`MatTrigPoly` stores a stack of m-by-m coefficient matrices, one per
power of z in a contiguous Laurent range.  Hermitian-valued instances (forms
like P*P - Q*Q on the circle) satisfy C[-k] == C[k]^H exactly, which is
preserved by the arithmetic here for both scalar backends.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scalars import QQi, is_exact_array, to_complex_array


def _conj_mat(mat: np.ndarray) -> np.ndarray:
    if mat.dtype == object:
        out = np.empty(mat.shape, dtype=object)
        for idx, v in np.ndenumerate(mat):
            out[idx] = v.conjugate() if isinstance(v, QQi) else np.conj(v)
        return out
    return np.conj(mat)


@dataclass(frozen=True)
class MatTrigPoly:
    """Sum of coeffs[k] * z**(offset + k) with m-by-m matrix coefficients."""

    coeffs: np.ndarray  # shape (num_powers, m, m)
    offset: int = 0

    def __post_init__(self):
        arr = self.coeffs
        if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
            raise ValueError("expected a stack of square matrices")
        if not is_exact_array(arr):
            arr = np.ascontiguousarray(arr, dtype=complex)
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)

    @property
    def size(self) -> int:
        return self.coeffs.shape[1]

    @property
    def powers(self) -> range:
        return range(self.offset, self.offset + self.coeffs.shape[0])

    @property
    def exact(self) -> bool:
        return is_exact_array(self.coeffs)

    def coeff(self, power: int) -> np.ndarray:
        k = power - self.offset
        if 0 <= k < self.coeffs.shape[0]:
            return self.coeffs[k]
        m = self.size
        out = np.zeros((m, m), dtype=self.coeffs.dtype)
        if self.exact:
            out[:] = QQi(0)
        return out

    # -- evaluation ---------------------------------------------------------
    def __call__(self, z) -> np.ndarray:
        acc = None
        for k in range(self.coeffs.shape[0] - 1, -1, -1):
            acc = self.coeffs[k] if acc is None else acc * z + self.coeffs[k]
        if acc is None:
            return np.zeros((self.size, self.size), dtype=complex)
        if isinstance(z, QQi):
            return acc * (z ** self.offset)
        return acc * (z ** self.offset if self.offset >= 0 else (1 / z) ** (-self.offset))

    def eval_batch(self, z: np.ndarray) -> np.ndarray:
        """Evaluate at an array of circle points; returns (len(z), m, m)."""
        z = np.asarray(z, dtype=complex)
        ks = np.arange(self.offset, self.offset + self.coeffs.shape[0])
        zp = z[:, None] ** ks[None, :]
        return np.tensordot(zp, to_complex_array(self.coeffs), axes=(1, 0))

    # -- arithmetic -----------------------------------------------------------
    def adjoint(self) -> "MatTrigPoly":
        """Pointwise conjugate transpose on the circle: C_k z^k -> C_k^H z^-k."""
        stack = np.stack([_conj_mat(self.coeffs[k]).T
                          for k in range(self.coeffs.shape[0] - 1, -1, -1)])
        hi = self.offset + self.coeffs.shape[0] - 1
        return MatTrigPoly(stack, offset=-hi)

    def __add__(self, other: "MatTrigPoly") -> "MatTrigPoly":
        lo = min(self.offset, other.offset)
        hi = max(self.offset + self.coeffs.shape[0],
                 other.offset + other.coeffs.shape[0])
        m = self.size
        exact = self.exact and other.exact
        out = np.zeros((hi - lo, m, m), dtype=object if exact else complex)
        if exact:
            out[:] = QQi(0)
        a = self.coeffs if exact else to_complex_array(self.coeffs)
        b = other.coeffs if exact else to_complex_array(other.coeffs)
        out[self.offset - lo: self.offset - lo + a.shape[0]] += a
        out[other.offset - lo: other.offset - lo + b.shape[0]] += b
        return MatTrigPoly(out, offset=lo)

    def __neg__(self) -> "MatTrigPoly":
        if self.exact:
            out = np.empty(self.coeffs.shape, dtype=object)
            for idx, v in np.ndenumerate(self.coeffs):
                out[idx] = -v
            return MatTrigPoly(out, offset=self.offset)
        return MatTrigPoly(-self.coeffs, offset=self.offset)

    def __sub__(self, other: "MatTrigPoly") -> "MatTrigPoly":
        return self + (-other)

    def __matmul__(self, other: "MatTrigPoly") -> "MatTrigPoly":
        if self.size != other.size:
            raise ValueError("matrix size mismatch")
        m = self.size
        exact = self.exact and other.exact
        na, nb = self.coeffs.shape[0], other.coeffs.shape[0]
        out = np.zeros((na + nb - 1, m, m), dtype=object if exact else complex)
        if exact:
            out[:] = QQi(0)
        a = self.coeffs if exact else to_complex_array(self.coeffs)
        b = other.coeffs if exact else to_complex_array(other.coeffs)
        for i in range(na):
            for j in range(nb):
                out[i + j] = out[i + j] + np.dot(a[i], b[j])
        return MatTrigPoly(out, offset=self.offset + other.offset)

    def truncate(self) -> "MatTrigPoly":
        """Drop identically-zero leading/trailing coefficient matrices."""
        if self.exact:
            live = [k for k in range(self.coeffs.shape[0])
                    if any(bool(v) for v in self.coeffs[k].ravel())]
        else:
            mags = np.abs(self.coeffs).sum(axis=(1, 2))
            live = np.where(mags > 0)[0].tolist()
        if not live:
            return MatTrigPoly(self.coeffs[:1], offset=0)
        lo, hi = live[0], live[-1]
        return MatTrigPoly(self.coeffs[lo: hi + 1], offset=self.offset + lo)

    # -- structure ---------------------------------------------------------------
    def is_hermitian_valued(self, tol: float = 0.0) -> bool:
        """C[-k] == C[k]^H for all k (exactly in the rational backend)."""
        for k in self.powers:
            a = self.coeff(-k)
            b = _conj_mat(self.coeff(k)).T
            if self.exact:
                if not all(x == y for x, y in zip(a.ravel(), b.ravel())):
                    return False
            else:
                scale = max(1.0, float(np.abs(to_complex_array(self.coeffs)).max()))
                if np.max(np.abs(to_complex_array(a) - to_complex_array(b))) > tol * scale:
                    return False
        return True

    def coeff_scale(self) -> float:
        return float(np.abs(to_complex_array(self.coeffs)).sum()) or 1.0

    def lipschitz_bound(self) -> float:
        """Bound on the angular derivative of the eigenvalues along the circle.

        d/dtheta T(e^{i theta}) = sum_k (i k) C_k e^{i k theta}; eigenvalues of a
        Hermitian family move no faster than the operator norm of the derivative.
        """
        total = 0.0
        arr = to_complex_array(self.coeffs)
        for k in self.powers:
            c = arr[k - self.offset]
            total += abs(k) * float(np.linalg.norm(c, 2))
        return total

    def to_numeric(self) -> "MatTrigPoly":
        if not self.exact:
            return self
        return MatTrigPoly(to_complex_array(self.coeffs), offset=self.offset)


def mat_identity(m: int) -> MatTrigPoly:
    return MatTrigPoly(np.eye(m, dtype=complex)[None, :, :], offset=0)
