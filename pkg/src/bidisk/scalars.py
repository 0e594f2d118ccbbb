"""Scalar backends: double-precision complex (default) and exact Gaussian rationals.

The exact backend exists so that brute-force oracles (resultants, reflections,
coefficient identities) can be evaluated with no rounding at all.  A Gaussian
rational is a complex number whose real and imaginary parts are ``Fraction``s;
the class is closed under +, -, *, / and conjugation.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        # exact binary expansion; deterministic, no rounding beyond the input
        return Fraction(x)
    raise TypeError(f"cannot build an exact rational from {type(x).__name__}")


class QQi:
    """Gaussian rational ``re + im*i`` with exact components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    def __setattr__(self, *_):
        raise AttributeError("QQi is immutable")

    @staticmethod
    def from_complex(c) -> "QQi":
        c = complex(c)
        return QQi(Fraction(c.real), Fraction(c.imag))

    # -- ring/field operations -------------------------------------------
    def _coerce(self, other):
        if isinstance(other, QQi):
            return other
        if isinstance(other, (int, Fraction)):
            return QQi(other)
        if isinstance(other, float):
            return QQi(other)
        if isinstance(other, complex):
            return QQi.from_complex(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QQi(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QQi(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QQi(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QQi(self.re * o.re - self.im * o.im,
                   self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return QQi((self.re * o.re + self.im * o.im) / d,
                   (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def __pow__(self, k: int):
        if k < 0:
            return QQi(1) / self ** (-k)
        out = QQi(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "QQi":
        return QQi(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    # -- conversions / comparisons ----------------------------------------
    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return float(self.abs2()) ** 0.5

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"QQi({self.re!r}, {self.im!r})"

    # -- JSON helpers (decimal-string rationals "p/q") ---------------------
    def to_json(self):
        return [str(self.re), str(self.im)]

    @staticmethod
    def from_json(pair) -> "QQi":
        return QQi(Fraction(str(pair[0])), Fraction(str(pair[1])))


QQI_ZERO = QQi(0)
QQI_ONE = QQi(1)


# -- generic helpers usable on either backend ------------------------------

def conj_s(x):
    """Conjugate a backend scalar."""
    if isinstance(x, QQi):
        return x.conjugate()
    return np.conj(x)


def abs2_s(x):
    """Squared modulus; exact (Fraction) for QQi inputs."""
    if isinstance(x, QQi):
        return x.abs2()
    return (x * np.conj(x)).real


def is_exact_array(arr: np.ndarray) -> bool:
    return arr.dtype == object


def exact_array(values) -> np.ndarray:
    """Object ndarray whose entries are all QQi."""
    arr = np.empty(np.shape(values), dtype=object)
    flat_in = np.asarray(values, dtype=object).ravel()
    flat = arr.ravel()
    for k, v in enumerate(flat_in):
        flat[k] = v if isinstance(v, QQi) else QQi.from_complex(complex(v)) \
            if isinstance(v, complex) else QQi(v)
    return arr.reshape(np.shape(values))


def to_complex_array(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == object:
        out = np.empty(arr.shape, dtype=complex)
        flat_in = arr.ravel()
        flat = out.ravel()
        for k, v in enumerate(flat_in):
            flat[k] = complex(v)
        return out.reshape(arr.shape)
    return np.asarray(arr, dtype=complex)
