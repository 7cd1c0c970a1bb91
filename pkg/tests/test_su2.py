"""Quaternionic directions, the forms beta/gamma/Omega, and the Z_u valuations."""

import math
import random

import pytest

from valcalc.exterior import (
    BaseForm,
    InvariantForm,
    d,
    fiber_integrate,
    lie_reeb,
    pullback_antipode,
    pullback_linear,
    sphere_volume_form,
)
from valcalc.contact import rumin, verify_zero_valuation
from valcalc.linalg import scalar_determinant
from valcalc.scalars import PI, Rat, Scalar, ZERO, rational
from valcalc.su2 import (
    ImDirection,
    alesker_directions,
    gram_zz,
    icosahedron_directions,
    imaginary_rotation,
    left_mult_matrix,
    quaternionic_forms,
    rational_unit_quaternion,
    right_mult_matrix,
    right_translation_matrix,
    stated_z_form,
    su2_basis,
    tasaki_density,
    z_rep,
)
from valcalc.valuation import (
    ValuationRep,
    derivation,
    intrinsic_volume_rep,
    pairing,
    unit_ball_value,
    unit_cube_value,
)


def random_direction(rng):
    while True:
        c = tuple(rng.randrange(-5, 6) for _ in range(3))
        if any(c):
            return ImDirection.of(*c)


class TestImDirection:
    def test_canonical_sign(self):
        assert ImDirection.of(-1, 0, 0) == ImDirection.of(1, 0, 0)
        assert ImDirection.of(0, -2, 4) == ImDirection.of(0, 1, -2)

    def test_scale_collapse(self):
        assert ImDirection.of(2, -4, 6) == ImDirection.of(1, -2, 3)
        assert ImDirection.of(Rat(1, 2), 0, Rat(3, 2)).coords == (1, 0, 3)

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            ImDirection.of(0, 0, 0)
        with pytest.raises(ValueError):
            ImDirection.of(0.0, 0.0, 0.0)

    def test_float_mode(self):
        u = ImDirection.of(-0.6, -0.8, 0.0)
        assert not u.exact
        assert u.coords[0] > 0
        assert abs(sum(x * x for x in u.coords) - 1.0) < 1e-12

    def test_unit_and_dot(self):
        u = ImDirection.of(2, -1, 3)
        assert abs(sum(x * x for x in u.unit()) - 1.0) < 1e-12
        assert ImDirection.of(1, 0, 0).dot_sq(ImDirection.of(1, 1, 0)) == Rat(1, 2)
        assert u.dot_sq(u) == 1


class TestQuaternionMatrices:
    def test_right_mult_squares_to_minus_norm(self):
        rng = random.Random(3)
        for _ in range(5):
            a, b, c = (rng.randrange(-4, 5) for _ in range(3))
            if not (a or b or c):
                continue
            m = right_mult_matrix(a, b, c)
            s = a * a + b * b + c * c
            sq = [[sum(m[r][t] * m[t][col] for t in range(4)) for col in range(4)]
                  for r in range(4)]
            assert sq == [[-s if r == col else 0 for col in range(4)] for r in range(4)]

    def test_right_mult_orthogonal(self):
        m = right_mult_matrix(1, 0, 0)
        mtm = [[sum(m[t][r] * m[t][col] for t in range(4)) for col in range(4)]
               for r in range(4)]
        assert mtm == [[1 if r == col else 0 for col in range(4)] for r in range(4)]

    def test_left_right_commute(self):
        rng = random.Random(5)
        for _ in range(4):
            q = rational_unit_quaternion(rng)
            left = left_mult_matrix(q)
            a, b, c = (rng.randrange(-3, 4) for _ in range(3))
            m = right_mult_matrix(a, b, c or 1)
            lm = [[sum(left[r][t] * m[t][col] for t in range(4)) for col in range(4)]
                  for r in range(4)]
            ml = [[sum(m[r][t] * left[t][col] for t in range(4)) for col in range(4)]
                  for r in range(4)]
            assert lm == ml

    def test_rational_unit_quaternion(self):
        rng = random.Random(11)
        for _ in range(5):
            q = rational_unit_quaternion(rng)
            assert sum(x * x for x in q) == 1

    def test_right_translation(self):
        q = (Rat(3, 5), Rat(4, 5), 0, 0)
        m = right_translation_matrix(q)
        # (1,0,0,0) -> q itself
        assert [m[r][0] for r in range(4)] == list(q)

    def test_imaginary_rotation_orthogonal(self):
        rng = random.Random(7)
        q = rational_unit_quaternion(rng)
        rot = imaginary_rotation(q)
        for r in range(3):
            for s in range(3):
                dot = sum(rot[t][r] * rot[t][s] for t in range(3))
                assert dot == (1 if r == s else 0)


class TestQuaternionicForms:
    def test_reeb_relations(self):
        # unit-rational direction (2,3,6)/7 exercises the exact normalization
        for coords in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (2, 3, 6)]:
            u = ImDirection.of(*coords)
            alpha, beta, gamma, omega = quaternionic_forms(u)
            assert (lie_reeb(beta) - gamma).is_zero()
            assert lie_reeb(gamma).is_zero()

    def test_projected(self):
        # re-projecting is a no-op: the stored terms are already tangential
        _, beta, gamma, omega = quaternionic_forms(ImDirection.of(1, 0, 0))
        for form in (beta, gamma, omega):
            assert InvariantForm(4, form.terms) == form

    def test_antipode_flips_beta(self):
        _, beta, _, _ = quaternionic_forms(ImDirection.of(0, 1, 0))
        assert (pullback_antipode(beta) + beta).is_zero()

    def test_gamma_wedge_dgamma(self):
        # twice the fiber volume; opposite to the orientation that grades
        # chi(ball) = +1, hence the explicit -2
        for coords in [(1, 0, 0), (0, 0, 1), (2, 3, 6)]:
            _, _, gamma, _ = quaternionic_forms(ImDirection.of(*coords))
            assert (gamma.wedge(d(gamma)) + sphere_volume_form(4) * 2).is_zero()

    def test_float_direction_forms(self):
        u = icosahedron_directions()[0]
        alpha, beta, gamma, omega = quaternionic_forms(u)
        lt = lie_reeb(beta) - gamma
        worst = max((abs(c) for p in lt.terms.values() for c in p.terms.values()),
                    default=0.0)
        assert worst < 1e-12


class TestZRep:
    def test_ball_value(self):
        for coords in [(1, 0, 0), (1, 1, 0), (2, -1, 3)]:
            mu = z_rep(ImDirection.of(*coords))
            assert unit_ball_value(mu) == PI

    def test_fiber_integral_vanishes(self):
        mu = z_rep(ImDirection.of(0, 1, 0))
        assert fiber_integrate(mu.omega).is_zero()
        assert mu.phi.is_zero()

    def test_orientation_against_stated_combination(self):
        u = ImDirection.of(1, 0, 0)
        assert (z_rep(u).omega + stated_z_form(u)).is_zero()
        stated = ValuationRep(4, stated_z_form(u), BaseForm(4))
        assert unit_ball_value(stated) == -PI

    def test_rumin_derivative_closed_form(self):
        u = ImDirection.of(1, 0, 0)
        alpha, beta, gamma, _ = quaternionic_forms(u)
        want = alpha.wedge(beta).wedge(d(gamma)) * (Rat(1, 2) * PI ** -1)
        assert (rumin(stated_z_form(u)).D_omega - want).is_zero()

    def test_degree_two(self):
        mu = z_rep(ImDirection.of(2, 3, 6))
        assert mu.degree() == 2

    def test_double_lowering_gives_euler(self):
        mu = z_rep(ImDirection.of(1, 0, 0))
        diff = derivation(derivation(mu)) - intrinsic_volume_rep(4, 0) * (2 * PI)
        assert verify_zero_valuation(diff.omega, diff.phi)

    def test_cube_value(self):
        for coords in [(1, 0, 0), (0, 1, 0), (0, 0, 1)]:
            assert unit_cube_value(z_rep(ImDirection.of(*coords))) == 2


class TestGram:
    def test_closed_form_values(self):
        ui = ImDirection.of(1, 0, 0)
        uj = ImDirection.of(0, 1, 0)
        assert gram_zz(ui, ui) == Rat(1, 2)
        assert gram_zz(ui, uj) == Rat(1, 4)
        assert gram_zz(ui, ImDirection.of(1, 1, 0)) == Rat(3, 8)

    def test_pipeline_matches_closed_form(self):
        rng = random.Random(17)
        for _ in range(5):
            u, v = random_direction(rng), random_direction(rng)
            assert gram_zz(u, v) == tasaki_density(u, v)

    def test_symmetries(self):
        u = ImDirection.of(3, -2, 1)
        v = ImDirection.of(1, 4, 2)
        g = gram_zz(u, v)
        assert gram_zz(v, u) == g
        assert gram_zz(ImDirection.of(-3, 2, -1), v) == g

    def test_rotation_covariance(self):
        rng = random.Random(23)
        u, v = ImDirection.of(1, 2, 0), ImDirection.of(0, 1, -1)
        base = gram_zz(u, v)
        for _ in range(2):
            rot = imaginary_rotation(rational_unit_quaternion(rng))
            ru = ImDirection.of(*(sum(rot[r][s] * u.coords[s] for s in range(3))
                                  for r in range(3)))
            rv = ImDirection.of(*(sum(rot[r][s] * v.coords[s] for s in range(3))
                                  for r in range(3)))
            assert gram_zz(ru, rv) == base

    def test_float_directions_rejected(self):
        u = icosahedron_directions()[0]
        with pytest.raises(ValueError):
            gram_zz(u, u)

    def test_tasaki_density(self):
        ui = ImDirection.of(1, 0, 0)
        assert tasaki_density(ui, ui) == Rat(1, 2)
        assert tasaki_density(ui, ImDirection.of(0, 0, 1)) == Rat(1, 4)
        u, v = icosahedron_directions()[:2]
        assert tasaki_density(u, v) == Rat(3, 10)
        assert tasaki_density(u, u) == Rat(1, 2)


class TestInvariance:
    def test_left_multiplication_fixes_omega_u(self):
        rng = random.Random(29)
        w = stated_z_form(ImDirection.of(1, -1, 2))
        for _ in range(5):
            q = rational_unit_quaternion(rng)
            assert (pullback_linear(w, left_mult_matrix(q)) - w).is_zero()

    def test_right_multiplication_conjugates_direction(self):
        rng = random.Random(31)
        u = ImDirection.of(1, 0, 0)
        q = rational_unit_quaternion(rng)
        pb = pullback_linear(stated_z_form(u), right_translation_matrix(q))
        rot = imaginary_rotation(q)
        u2 = ImDirection.of(*(rot[r][0] for r in range(3)))
        assert (pb - stated_z_form(u2)).is_zero()


class TestIcosahedron:
    def test_six_classes(self):
        dirs = icosahedron_directions()
        assert len(dirs) == 6
        assert len(set(dirs)) == 6

    def test_pairwise_angles(self):
        dirs = icosahedron_directions()
        for a in range(6):
            for b in range(a + 1, 6):
                dot = sum(x * y for x, y in zip(dirs[a].unit(), dirs[b].unit()))
                assert abs(dot * dot - 0.2) < 1e-12

    def test_algebraic_dot(self):
        dirs = icosahedron_directions()
        assert dirs[0].dot_sq(dirs[3]) == Rat(1, 5)
        assert dirs[2].dot_sq(dirs[2]) == 1

    def test_gram_pattern(self):
        dirs = icosahedron_directions()
        for a in range(6):
            for b in range(6):
                want = Rat(1, 2) if a == b else Rat(3, 10)
                assert tasaki_density(dirs[a], dirs[b]) == want

    def test_user_rotation(self):
        rng = random.Random(37)
        rot = imaginary_rotation(rational_unit_quaternion(rng))
        rot = [[float(x) for x in row] for row in rot]
        dirs = icosahedron_directions(rotation=rot)
        for a in range(6):
            for b in range(a + 1, 6):
                dot = sum(x * y for x, y in zip(dirs[a].unit(), dirs[b].unit()))
                assert abs(dot * dot - 0.2) < 1e-12

    def test_bad_rotation_rejected(self):
        with pytest.raises(ValueError):
            icosahedron_directions(rotation=[[1, 0, 0], [0, 2, 0], [0, 0, 1]])


class TestBasis:
    def test_labels_and_degrees(self):
        basis = su2_basis()
        assert len(basis) == 10
        assert [lab for lab, _ in basis] == [
            "chi", "vol1", "Z_u1", "Z_u2", "Z_u3", "Z_u4", "Z_u5", "Z_u6",
            "vol3", "vol",
        ]
        assert [mu.degree() for _, mu in basis] == [0, 1, 2, 2, 2, 2, 2, 2, 3, 4]

    def test_alesker_flag(self):
        basis = su2_basis("alesker")
        labels = [lab for lab, _ in basis]
        assert labels[2:8] == ["Z_i", "Z_j", "Z_k", "Z_i+j", "Z_i+k", "Z_j+k"]
        for _, mu in basis[2:8]:
            assert unit_ball_value(mu) == PI

    def test_alesker_gram_nonsingular(self):
        dirs = alesker_directions()
        gram = [[tasaki_density(u, v) for v in dirs] for u in dirs]
        det = scalar_determinant(gram)
        assert det != ZERO
        assert float(det) > 0

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            su2_basis("fourier")
