import random

import numpy as np
import pytest

from _oracles import bundle_frame, random_form
from valcalc.contact import (
    ContactData,
    RuminResult,
    contact_data,
    dual_lefschetz,
    horizontal_part,
    rumin,
    verify_zero_valuation,
)
from valcalc.exterior import (
    BaseForm,
    InvariantForm,
    SpherePoly,
    alpha_form,
    contract,
    d,
    dx_top_form,
    fiber_integrate,
    lie_reeb,
    sphere_volume_form,
)
from valcalc.scalars import PI, Rat, Scalar


class TestContactData:
    def test_reeb_pairing(self):
        for n in (2, 3, 4):
            data = contact_data(n)
            one = InvariantForm(n, {((), ()): SpherePoly.constant(n, 1)}, projected=True)
            assert contract(data.reeb, data.alpha) == one
            assert lie_reeb(data.alpha).is_zero()

    def test_contact_condition_nondegenerate(self):
        # alpha ^ (d alpha)^(n-1) never vanishes on the bundle
        rng = random.Random(7)
        for n in (2, 3, 4):
            data = contact_data(n)
            form = data.alpha
            da = d(data.alpha)
            for _ in range(n - 1):
                form = form.wedge(da)
            for _ in range(10):
                raw = np.array([rng.gauss(0, 1) for _ in range(n)])
                v = raw / np.linalg.norm(raw)
                frame = bundle_frame(v)
                assert abs(form.evaluate_at(v, frame)) > 1e-9

    def test_dual_lefschetz_trace(self):
        for n in (2, 3, 4):
            got = dual_lefschetz(d(alpha_form(n)))
            expect = InvariantForm(n, {((), ()): SpherePoly.constant(n, n - 1)},
                                   projected=True)
            assert got == expect


class TestRumin:
    def test_exact_forms_have_zero_derivative(self):
        rng = random.Random(11)
        for n in (2, 3, 4):
            for _ in range(4):
                eta = random_form(rng, n, n - 2)
                res = rumin(d(eta))
                assert res.D_omega.is_zero()

    def test_alpha_multiples_have_zero_derivative(self):
        rng = random.Random(12)
        for n in (2, 3, 4):
            for _ in range(4):
                tau = random_form(rng, n, n - 2)
                res = rumin(alpha_form(n).wedge(tau))
                assert res.D_omega.is_zero()

    def test_result_invariants(self):
        rng = random.Random(13)
        for n in (3, 4):
            for _ in range(4):
                omega = random_form(rng, n, n - 1)
                res = rumin(omega)
                assert res.D_omega == d(omega + alpha_form(n).wedge(res.xi))
                assert horizontal_part(res.D_omega).is_zero()
                assert d(res.D_omega).is_zero()
                if not res.xi.is_zero():
                    assert res.xi.degree() == n - 2

    def test_linearity(self):
        rng = random.Random(14)
        for n in (3, 4):
            w1 = random_form(rng, n, n - 1)
            w2 = random_form(rng, n, n - 1)
            a, b = Rat(2, 3), Rat(-5, 7)
            lhs = rumin(w1 * a + w2 * b).D_omega
            rhs = rumin(w1).D_omega * a + rumin(w2).D_omega * b
            assert lhs == rhs

    def test_degree_mismatch_rejected(self):
        with pytest.raises(ValueError):
            rumin(alpha_form(4))

    def test_zero_input(self):
        res = rumin(InvariantForm.zero(4))
        assert res.D_omega.is_zero() and res.xi.is_zero()

    def test_sphere_volume_closed(self):
        for n in (2, 3, 4):
            res = rumin(sphere_volume_form(n))
            assert res.D_omega.is_zero()

    def test_pi_coefficients(self):
        omega = sphere_volume_form(4) * (PI ** -1) + \
            random_form(random.Random(15), 4, 3) * Scalar.of(1, 2, pi=1)
        res = rumin(omega)
        assert horizontal_part(res.D_omega).is_zero()
        assert d(res.D_omega).is_zero()


class TestAnsatz:
    def test_matches_closed_form_small_dims(self):
        rng = random.Random(21)
        for n in (2, 3):
            for _ in range(3):
                omega = random_form(rng, n, n - 1)
                res_a = rumin(omega, method="ansatz")
                res_l = rumin(omega, method="lefschetz")
                assert res_a.D_omega == res_l.D_omega
                assert horizontal_part(res_a.D_omega).is_zero()
                assert res_a.ansatz_degree >= 0

    def test_matches_closed_form_dim_four(self):
        n = 4
        omega = InvariantForm(n, {
            ((0,), (1, 2)): SpherePoly.constant(n, 1),
            ((1, 3), (0,)): SpherePoly.constant(n, Rat(1, 2)),
        })
        res_a = rumin(omega, method="ansatz")
        res_l = rumin(omega, method="lefschetz")
        assert res_a.D_omega == res_l.D_omega

    def test_unknown_method_rejected(self):
        with pytest.raises(ValueError):
            rumin(sphere_volume_form(3), method="magic")


class TestVerifyZero:
    def test_zero_pair(self):
        for n in (2, 3, 4):
            assert verify_zero_valuation(InvariantForm.zero(n), BaseForm(n))

    def test_exact_low_fiber_degree(self):
        # eta of fiber degree <= n-2 gives an exact form with zero fiber integral
        rng = random.Random(31)
        for n in (3, 4):
            for _ in range(5):
                raw = {}
                for _ in range(3):
                    jlen = rng.randrange(0, n - 1)
                    ilen = n - 2 - jlen
                    if not 0 <= ilen <= n:
                        continue
                    I = tuple(sorted(rng.sample(range(n), ilen)))
                    J = tuple(sorted(rng.sample(range(n), jlen)))
                    e = [0] * n
                    e[rng.randrange(n)] = rng.randrange(0, 2)
                    raw[(I, J)] = SpherePoly(n, {tuple(e): Rat(rng.randrange(-3, 4))})
                eta = InvariantForm(n, raw)
                assert verify_zero_valuation(d(eta), BaseForm(n))

    def test_euler_representative_not_zero(self):
        omega = sphere_volume_form(4) * (PI ** -2) * Rat(1, 2)
        assert rumin(omega).D_omega.is_zero()
        assert not verify_zero_valuation(omega, BaseForm(4))

    def test_volume_not_zero(self):
        phi = BaseForm(4, {(0, 1, 2, 3): Scalar.of(1)})
        assert not verify_zero_valuation(InvariantForm.zero(4), phi)
