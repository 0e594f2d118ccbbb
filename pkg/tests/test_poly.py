import numpy as np
import pytest

from bidisk import (
    BiPoly,
    UniPoly,
    QQi,
    DegreeError,
    DomainError,
    reflect,
    slice_poly,
    shear,
    multiply,
    linear_combine,
    is_symmetric,
    homog_expand,
)


def bp(entries, bidegree=None, exact=False):
    return BiPoly.from_dict(entries, bidegree=bidegree, exact=exact)


P_3ZW = {(0, 0): 3, (1, 0): -1, (0, 1): -1}          # 3 - z1 - z2
P_2ZW = {(0, 0): 2, (1, 0): -1, (0, 1): -1}          # 2 - z1 - z2
P_SEC = {(0, 0): 3, (1, 0): -1, (2, 0): -1, (0, 1): -1}  # 3 - z - z^2 - w


def random_bipoly(rng, n1, n2, scale=1.0):
    c = rng.standard_normal((n1 + 1, n2 + 1)) + 1j * rng.standard_normal((n1 + 1, n2 + 1))
    return BiPoly(scale * c)


def random_torusance(rng, count):
    th = rng.uniform(0, 2 * np.pi, size=(count, 2))
    return np.exp(1j * th)


class TestReflect:
    def test_known_reflection(self):
        p = bp(P_3ZW, bidegree=(1, 1))
        r = reflect(p, (1, 1))
        expected = bp({(1, 1): 3, (1, 0): -1, (0, 1): -1})
        assert r == expected

    def test_constant_fixed_point(self):
        p = bp({(0, 0): 1})
        assert reflect(p, (0, 0)) == p

    def test_involution(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            p = random_bipoly(rng, 2, 3)
            assert reflect(reflect(p, (2, 3)), (2, 3)) == p

    def test_degree_error(self):
        p = bp(P_SEC)
        with pytest.raises(DegreeError):
            reflect(p, (1, 1))

    def test_modulus_preserved_on_torus(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            p = random_bipoly(rng, 2, 2)
            r = reflect(p, (2, 2))
            for z1, z2 in random_torusance(rng, 20):
                a, b = abs(p(z1, z2)), abs(r(z1, z2))
                assert abs(a - b) <= 1e-12 * max(1.0, a)


class TestEval:
    def test_shared_boundary_zero(self):
        p = bp(P_2ZW)
        assert p(1.0, 1.0) == 0

    def test_origin_gives_constant(self):
        rng = np.random.default_rng(3)
        p = random_bipoly(rng, 3, 2)
        assert p(0, 0) == p.coeffs[0, 0]

    def test_nonsaturated_example_zero(self):
        p = bp(P_SEC)
        assert p(1.0, 1.0) == 0

    def test_exact_eval(self):
        p = bp(P_2ZW, exact=True)
        v = p(QQi(1), QQi(1))
        assert v == QQi(0)


class TestSlice:
    def test_diagonal_slice(self):
        p = bp(P_3ZW)
        s = slice_poly(p, (1.0, 1.0)).trim()
        assert np.allclose(s.coeffs, [3, -2])

    def test_constant_slice(self):
        p = bp({(0, 0): 5.0})
        s = slice_poly(p, (1j, -1.0))
        assert np.allclose(s.coeffs, [5.0])

    def test_off_torus_rejected(self):
        p = bp(P_3ZW)
        with pytest.raises(DomainError):
            slice_poly(p, (0.5, 1.0))

    def test_slice_reflection_compatibility(self):
        # zeta^n * reflect(slice(p)) == slice(reflect(p)) at degree |n|
        rng = np.random.default_rng(5)
        for _ in range(20):
            p = random_bipoly(rng, 2, 2)
            n1, n2 = p.bidegree
            for z1, z2 in random_torus_points(rng, 3):
                lhs = slice_poly(p, (z1, z2)).reflect(n1 + n2) * (z1 ** n1 * z2 ** n2)
                rhs = slice_poly(reflect(p, (n1, n2)), (z1, z2))
                assert np.allclose(lhs.coeffs, rhs.coeffs, atol=1e-12)


def random_torus_points(rng, count):
    th = rng.uniform(0, 2 * np.pi, size=(count, 2))
    return np.exp(1j * th)


class TestShear:
    def test_identity_at_zero(self):
        p = bp(P_SEC)
        assert shear(p, 0) == p

    def test_substitution_example(self):
        p = bp(P_2ZW)
        q = shear(p, 1)
        assert q.bidegree == (1, 2)
        assert q == bp({(0, 0): 2, (1, 1): -1, (0, 1): -1})

    def test_substitution_oracle(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            p = random_bipoly(rng, 2, 2)
            for k in (1, 2, 3):
                q = shear(p, k)
                for _ in range(5):
                    z = rng.standard_normal() + 1j * rng.standard_normal()
                    w = rng.standard_normal() + 1j * rng.standard_normal()
                    assert abs(q(z, w) - p(w ** k * z, w)) <= 1e-10 * (1 + abs(p(w ** k * z, w)))

    def test_commutes_with_reflection(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            p = random_bipoly(rng, 2, 2)
            n = p.bidegree
            for k in (1, 2, 3):
                lhs = reflect(shear(p, k))
                rhs = shear(reflect(p, n), k)
                assert np.allclose(lhs.coeffs, rhs.coeffs, atol=1e-12)

    def test_ring_homomorphism(self):
        rng = np.random.default_rng(19)
        for _ in range(10):
            p = random_bipoly(rng, 2, 1)
            q = random_bipoly(rng, 1, 2)
            for k in (1, 2):
                lhs = shear(multiply(p, q), k)
                rhs = multiply(shear(p, k), shear(q, k))
                assert np.allclose(lhs.pad(rhs.bidegree).coeffs, rhs.coeffs, atol=1e-10)


class TestArithmetic:
    def test_self_reflection_difference(self):
        p = bp(P_2ZW, bidegree=(1, 1))
        diff = p - reflect(p, (1, 1))
        assert diff == bp({(0, 0): 2, (1, 1): -2})

    def test_add_zero(self):
        p = bp(P_3ZW)
        assert linear_combine([(1.0, p), (0.0, p)]) == p

    def test_product_expansion(self):
        # (1 - z)(z - w) = z - w - z^2 + zw
        a = bp({(0, 0): 1, (1, 0): -1})
        b = bp({(1, 0): 1, (0, 1): -1})
        assert multiply(a, b) == bp({(1, 0): 1, (0, 1): -1, (2, 0): -1, (1, 1): 1})

    def test_exact_product(self):
        a = bp({(0, 0): QQi(1, 0), (1, 0): QQi("-1/3", 0)}, exact=True)
        b = bp({(0, 0): QQi(3, 0)}, exact=True)
        prod = multiply(a, b)
        assert prod.coeffs[1, 0] == QQi(-1)


class TestSymmetric:
    def test_conjugate_pair(self):
        a = 0.3 + 1.7j
        v = bp({(1, 0): a, (0, 1): np.conj(a)}, bidegree=(1, 1))
        assert is_symmetric(v, (1, 1))

    def test_plain_monomial_not_symmetric(self):
        v = bp({(1, 0): 1}, bidegree=(1, 1))
        assert not is_symmetric(v, (1, 1))

    def test_product_witness(self):
        a = bp({(0, 0): 1, (1, 0): -1})
        b = bp({(1, 0): 1, (0, 1): -1})
        v = multiply(a, b)
        assert is_symmetric(v, (2, 1))


class TestHomogExpand:
    def test_first_order_part(self):
        p = bp(P_2ZW)
        ex = homog_expand(p, (1.0, 1.0))
        assert ex.start == 1
        p1 = ex.part(1)
        assert p1 == bp({(1, 0): 1, (0, 1): 1})

    def test_reflected_first_order_part(self):
        p = bp(P_2ZW, bidegree=(1, 1))
        q = reflect(p, (1, 1))
        ex = homog_expand(q, (1.0, 1.0))
        assert ex.start == 1
        assert ex.part(1) == bp({(1, 0): -1, (0, 1): -1})

    def test_nonvanishing_point(self):
        p = bp(P_3ZW)
        ex = homog_expand(p, (1.0, 1.0))
        assert ex.start == 0
        assert abs(complex(ex.part(0).coeffs[0, 0]) - 1.0) < 1e-12

    def test_reassembly(self):
        rng = np.random.default_rng(23)
        for _ in range(5):
            p = random_bipoly(rng, 2, 2)
            z1, z2 = np.exp(1j * rng.uniform(0, 2 * np.pi, 2))
            ex = homog_expand(p, (z1, z2))
            for _ in range(20):
                z = rng.standard_normal(2) * 0.4 + 1j * rng.standard_normal(2) * 0.4
                eta = (1 - z[0] / z1, 1 - z[1] / z2)
                val = ex.reassemble(eta)
                assert abs(val - p(z[0], z[1])) <= 1e-10 * (1 + abs(p(z[0], z[1])))


class TestJsonContract:
    def test_roundtrip_numeric(self):
        p = bp(P_SEC)
        d = p.to_json_dict()
        q = BiPoly.from_json_dict(d)
        assert p == q

    def test_roundtrip_exact(self):
        p = bp({(0, 0): QQi("1/3", "-2/7"), (1, 1): QQi(2, 1)}, exact=True)
        d = p.to_json_dict()
        q = BiPoly.from_json_dict(d)
        assert q.exact
        assert q.coeffs[0, 0] == QQi("1/3", "-2/7")

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            BiPoly.from_json_dict({"bidegree": [2, 1], "coeffs": [[[1, 0]]]})


class TestUniPoly:
    def test_reflect(self):
        q = UniPoly.from_coeffs([3, -2])
        r = q.reflect()
        assert np.allclose(r.coeffs, [-2, 3])

    def test_roots(self):
        q = UniPoly.from_coeffs([2, -3, 1])  # (z-1)(z-2)
        roots = sorted(q.roots().real.tolist())
        assert np.allclose(roots, [1, 2])

    def test_exact_backend(self):
        q = UniPoly.from_coeffs([QQi(1), QQi(0, 1)], exact=True)
        assert q(QQi(0, 1)) == QQi(0)
