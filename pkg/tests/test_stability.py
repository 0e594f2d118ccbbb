import numpy as np
import pytest

from bidisk import BiPoly, UniPoly, QQi, reflect
from bidisk.stability import (
    pq_matrices,
    schur_cohn_form,
    univariate_schur_cohn,
    certified_psd_sweep,
    stable_closed,
    scattering_stable,
    SCATTERING_STABLE,
    STABLE_CLOSED,
    UNSTABLE,
    DEGENERATE,
)


def bp(entries, bidegree=None, exact=False):
    return BiPoly.from_dict(entries, bidegree=bidegree, exact=exact)


P_2ZW = bp({(0, 0): 2, (1, 0): -1, (0, 1): -1})
P_3Z1Z2 = bp({(0, 0): 3, (1, 0): -1, (0, 1): -1})
P_SEC = bp({(0, 0): 3, (1, 0): -1, (2, 0): -1, (0, 1): -1})
V_SEC = bp({(1, 0): 1, (0, 1): -1, (2, 0): -1, (1, 1): 1})  # (1-z)(z-w)
P_DEG = bp({(0, 0): 1, (1, 1): -1})  # 1 - z1 z2


class TestPQMatrices:
    def test_first_order_inner(self):
        P, Q = pq_matrices(P_2ZW)
        # P = [2 - z], Q = [reflection of the top row] = [-z]
        assert np.allclose(P.coeffs[:, 0, 0], [2, -1])
        assert np.allclose(Q.coeffs[:, 0, 0], [0, -1])

    def test_quadratic_outer(self):
        P, Q = pq_matrices(P_SEC)
        assert np.allclose(P.coeffs[:, 0, 0], [3, -1, -1])
        assert np.allclose(Q.coeffs[:, 0, 0], [0, 0, -1])

    def test_reflected_row_oracle(self):
        # Q rows are z^n conj(p_j(1/conj z)) in reversed order
        rng = np.random.default_rng(2)
        c = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        p = BiPoly(c)
        P, Q = pq_matrices(p)
        for z in np.exp(1j * rng.uniform(0, 2 * np.pi, 6)):
            rows = [UniPoly(c[:, j]) for j in range(3)]
            for i in range(2):
                for j in range(i, 2):
                    t = j - i
                    want = (z ** 2) * np.conj(rows[2 - t](1 / np.conj(z)))
                    assert abs(Q(z)[i, j] - want) < 1e-12 * (1 + abs(want))


class TestSchurCohnForm:
    def test_boundary_zero_line(self):
        T = schur_cohn_form(P_2ZW)
        assert abs(T(1.0)[0, 0]) < 1e-12

    def test_quadratic_identity_on_circle(self):
        # the form equals (|p|^2 - |reflect(p)|^2) / (1 - |w|^2) sandwiched
        rng = np.random.default_rng(4)
        for p in (P_2ZW, P_SEC):
            n = p.bidegree
            pt = reflect(p, n)
            T = schur_cohn_form(p)
            m = n[1]
            for _ in range(30):
                z = np.exp(1j * rng.uniform(0, 2 * np.pi))
                w = rng.standard_normal() + 1j * rng.standard_normal()
                eta = rng.standard_normal() + 1j * rng.standard_normal()
                num = np.conj(p(z, eta)) * p(z, w) - np.conj(pt(z, eta)) * pt(z, w)
                den = 1 - np.conj(eta) * w
                lhs = num / den
                ve = np.array([np.conj(eta) ** k for k in range(m)])
                vw = np.array([w ** k for k in range(m)])
                rhs = ve @ T(z) @ vw
                assert abs(lhs - rhs) < 1e-10 * (1 + abs(lhs))

    def test_nonnegative_on_grid(self):
        T = schur_cohn_form(P_SEC)
        zs = np.exp(2j * np.pi * np.arange(256) / 256)
        vals = np.array([T(z)[0, 0].real for z in zs])
        assert vals.min() > -1e-10

    def test_closed_form_perturbation_family(self):
        # the scalar form for p + t*(1-z)(z-w) is |1-z|^2 (2t + 8 + 6(t+1) Re z)
        rng = np.random.default_rng(6)
        for _ in range(64):
            t = rng.uniform(-2.5, 1.5)
            z = np.exp(1j * rng.uniform(0, 2 * np.pi))
            q = P_SEC + t * V_SEC
            val = schur_cohn_form(q)(z)[0, 0]
            want = abs(1 - z) ** 2 * (2 * t + 8 + 6 * (t + 1) * z.real)
            assert abs(val - want) < 1e-10 * (1 + abs(want))

    def test_exact_hermitian_symmetry(self):
        p = bp({(0, 0): QQi(3), (1, 0): QQi(-1), (2, 0): QQi(-1),
                (0, 1): QQi(-1)}, exact=True)
        T = schur_cohn_form(p)
        assert T.exact
        assert T.is_hermitian_valued()


class TestUnivariateSchurCohn:
    @pytest.mark.parametrize("t", [-1.75, -1.0, 0.0, 0.5])
    def test_interval_family_stable(self, t):
        q = UniPoly.from_coeffs([3, 1 - t, -(1 + t)])
        assert univariate_schur_cohn(q)

    def test_zero_at_origin(self):
        assert not univariate_schur_cohn(UniPoly.from_coeffs([0, 1]))

    def test_root_outside_disk(self):
        assert univariate_schur_cohn(UniPoly.from_coeffs([2, -1]))

    def test_companion_root_oracle(self):
        rng = np.random.default_rng(8)
        for _ in range(40):
            c = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            q = UniPoly(c)
            want = bool(np.all(np.abs(q.roots()) > 1 + 1e-9))
            got = univariate_schur_cohn(q)
            assert got == want


class TestSweep:
    def test_strictly_positive(self):
        sw = certified_psd_sweep(schur_cohn_form(P_3Z1Z2), mode="strict")
        assert sw.ok and sw.certified and sw.margin > 0

    def test_boundary_zero_candidate(self):
        sw = certified_psd_sweep(schur_cohn_form(P_2ZW), mode="semidefinite")
        assert sw.ok
        assert len(sw.zero_candidates) == 1
        assert abs(sw.zero_candidates[0] - 1.0) < 1e-6

    def test_negative_identity(self):
        from bidisk.trig import MatTrigPoly
        T = MatTrigPoly(-np.eye(2)[None, :, :], offset=0)
        sw = certified_psd_sweep(T, mode="strict")
        assert not sw.ok and sw.observed_min < -0.9


class TestVerdicts:
    def test_closed_stable(self):
        rep = stable_closed(P_3Z1Z2)
        assert rep.verdict == STABLE_CLOSED and rep.certified

    def test_boundary_contact_not_closed_stable(self):
        assert stable_closed(P_2ZW).verdict != STABLE_CLOSED

    def test_scattering_with_boundary_zero(self):
        rep = scattering_stable(P_2ZW)
        assert rep.verdict == SCATTERING_STABLE
        assert any(abs(z - 1) < 1e-6 and abs(w - 1) < 1e-6
                   for z, w in rep.boundary_zero_candidates)

    def test_quadratic_example(self):
        assert scattering_stable(P_SEC).verdict == SCATTERING_STABLE

    def test_shared_factor_degenerate(self):
        assert scattering_stable(P_DEG).verdict == DEGENERATE

    def test_outside_interval_unstable(self):
        q = P_SEC + 1.0 * V_SEC
        assert scattering_stable(q).verdict == UNSTABLE

    def test_closed_implies_scattering(self):
        for p in (P_3Z1Z2, bp({(0, 0): 4, (1, 0): -1, (0, 1): -1})):
            assert stable_closed(p).verdict == STABLE_CLOSED
            assert scattering_stable(p).verdict == SCATTERING_STABLE

    def test_modulus_dominance(self):
        # |p| >= |reflect(p)| on the closed bidisk for scattering stable p
        rng = np.random.default_rng(10)
        for p in (P_2ZW, P_SEC, P_3Z1Z2):
            n = p.bidegree
            pt = reflect(p, n)
            r = np.sqrt(rng.uniform(0, 1, 2000))
            th = rng.uniform(0, 2 * np.pi, (2000, 2))
            z1 = r * np.exp(1j * th[:, 0])
            z2 = np.sqrt(rng.uniform(0, 1, 2000)) * np.exp(1j * th[:, 1])
            for a, b in zip(z1[:200], z2[:200]):
                assert abs(p(a, b)) >= abs(pt(a, b)) - 1e-10

    def test_constant_polynomial(self):
        assert scattering_stable(bp({(0, 0): 5.0})).verdict == SCATTERING_STABLE
