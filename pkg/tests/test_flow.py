"""Deformation family, transport PDE residual, identity suites, formal
flow, integer powers, the layer-vanishing probe, and symmetry detection."""

import dataclasses

import pytest

from forminv import (
    HomogeneityError,
    MapF,
    MSeries,
    NilpotencyError,
    PolyMap,
    check_bcw_quadratic_nilpotent,
    check_euler_identities,
    check_gpde,
    check_lemma31,
    check_newp,
    check_prop310,
    deformation_inverse,
    formal_flow,
    invert_bcw,
    invert_recurrent,
    pde_residual,
    polynomiality_probe,
    power_map,
    symmetry_detector,
)
from forminv.randmaps import random_h, random_map

from conftest import mono


class TestDeformation:
    def test_n_t_series(self, catalan_map):
        dinv = deformation_inverse(catalan_map, 5)
        # N_t = z^2 + 2t z^3 + 5 t^2 z^4 + ...
        assert dinv.n_t.components[0].terms[(2, 0)] == 1
        assert dinv.n_t.components[0].terms[(3, 1)] == 2
        assert dinv.n_t.components[0].terms[(4, 2)] == 5

    def test_t_equals_one_recovers_inverse(self, catalan_map):
        dinv = deformation_inverse(catalan_map, 6)
        g = invert_recurrent(catalan_map, 6).inverse_map()
        assert dinv.at(1).eq_through(g, 6)

    def test_t_zero_is_identity(self, catalan_map):
        dinv = deformation_inverse(catalan_map, 6)
        assert dinv.at(0).is_identity_through(6)

    def test_annihilating_h_gives_constant_family(self, shear_map):
        # JH.H = 0: N_t = H for all t
        dinv = deformation_inverse(shear_map, 6)
        lifted = shear_map.h.with_params(1)
        assert all(
            a.eq_through(b, 6)
            for a, b in zip(dinv.n_t.components, lifted.components)
        )

    def test_g_t_inverts_f_t_symbolically(self, rng):
        for _ in range(3):
            f = random_map(rng, rng.choice((1, 2)))
            dinv = deformation_inverse(f, 6)
            assert dinv.g_t().compose(dinv.f_t(), cap=6).is_identity_through(6)
            assert dinv.f_t().compose(dinv.g_t(), cap=6).is_identity_through(6)


class TestPdeResidual:
    def test_zero_on_valid_input(self, rng):
        for _ in range(3):
            f = random_map(rng, rng.choice((1, 2, 3)))
            res = pde_residual(deformation_inverse(f, 6))
            assert all(c.is_zero_through(6) for c in res.components)

    def test_h_zero(self):
        res = pde_residual(deformation_inverse(MapF(PolyMap.zero(2)), 5))
        assert all(c.is_zero_through(5) for c in res.components)

    def test_detects_injected_fault(self, catalan_map):
        dinv = deformation_inverse(catalan_map, 6)
        # perturb the second layer by z^3: shows up at t-degree 0
        fault = mono(1, (3,), 1).with_params(1).shift_param(0, 1)
        corrupted = dataclasses.replace(
            dinv, n_t=PolyMap([dinv.n_t.components[0] + fault])
        )
        res = pde_residual(corrupted)
        assert not all(c.is_zero_through(4) for c in res.components)
        # the t^0 coefficient is already nonzero
        t0 = res.components[0].param_coefficients().get((0,))
        assert t0 is not None and not t0.is_zero()


class TestLemma31:
    def test_shear_nilpotency_index_two(self, shear_map):
        report = check_lemma31(shear_map, 6)
        assert report.ok
        assert report.data["JH nilpotency index"] == 2
        assert report.data["JN_t nilpotency index (through truncation)"] == 2

    def test_one_var(self, catalan_map):
        assert check_lemma31(catalan_map, 6).ok

    def test_h_zero(self):
        report = check_lemma31(MapF(PolyMap.zero(2)), 4)
        assert report.ok
        assert report.data["JH nilpotency index"] == 1

    def test_random(self, rng):
        for _ in range(3):
            assert check_lemma31(random_map(rng, rng.choice((1, 2))), 5).ok


class TestNewP:
    def test_shear(self, shear_map):
        report = check_newp(shear_map.h, 6)
        assert report.ok
        names = [item.name for item in report.items]
        assert "G = z + H" in names
        assert "F^[3] = z - 3H" in names

    def test_square_map_has_nonzero_second_layer(self, catalan_map):
        report = check_newp(catalan_map.h, 6)
        assert report.ok
        assert "first nonzero higher layer: 2" in report.items[0].detail

    def test_h_zero(self):
        assert check_newp(PolyMap.zero(2), 4).ok


class TestBcwQuadraticNilpotent:
    def test_shear(self, shear_map):
        report = check_bcw_quadratic_nilpotent(shear_map.h, 6)
        assert report.ok
        assert report.data["JH^2"] == "0"

    def test_square_gate(self, catalan_map):
        report = check_bcw_quadratic_nilpotent(catalan_map.h, 6)
        assert report.ok
        assert report.data["JH^2"] == "nonzero"

    def test_euler_bridge_random_cubic(self, rng):
        for _ in range(4):
            h = random_h(rng, 2, homogeneous_degree=3)
            assert check_bcw_quadratic_nilpotent(h, 6).ok

    def test_rejects_inhomogeneous(self):
        with pytest.raises(HomogeneityError):
            check_bcw_quadratic_nilpotent(
                PolyMap([mono(1, (2,)) + mono(1, (3,))]), 5
            )


class TestProp310:
    def test_square_map(self, catalan_map):
        assert check_prop310(catalan_map, 5, 2, 2).ok

    def test_random(self, rng):
        f = random_map(rng, 2, max_deg=3)
        assert check_prop310(f, 4, 3, 3).ok


class TestGpde:
    def test_identity_initial_condition(self, catalan_map):
        u0 = PolyMap.identity(1)
        assert check_gpde(u0, catalan_map.h, 5).ok

    def test_square_initial_condition(self, catalan_map):
        u0 = PolyMap([mono(1, (2,))])
        assert check_gpde(u0, catalan_map.h, 5).ok

    def test_h_zero(self):
        u0 = PolyMap([mono(1, (2,))])
        assert check_gpde(u0, PolyMap.zero(1), 4).ok


class TestEulerIdentities:
    def test_one_var_quadratic(self, catalan_map):
        assert check_euler_identities(catalan_map.h, 6).ok

    def test_nilpotent_case_terminates_after_first_power(self, shear_map):
        assert check_euler_identities(shear_map.h, 6).ok

    def test_random_cubic(self, rng):
        h = random_h(rng, 2, homogeneous_degree=3)
        assert check_euler_identities(h, 6).ok

    def test_rejects_inhomogeneous(self):
        with pytest.raises(HomogeneityError):
            check_euler_identities(PolyMap([mono(1, (2,)) + mono(1, (4,))]), 5)


class TestFormalFlow:
    def test_low_order_weights(self, catalan_map):
        # F(z; t) = z - t z^2 + t(t-1) z^3 - ...
        fl = formal_flow(catalan_map, 4)
        comp = fl.map.components[0]
        assert comp.terms[(1, 0)] == 1
        assert comp.terms[(2, 1)] == -1
        assert comp.terms[(3, 1)] == -1
        assert comp.terms[(3, 2)] == 1

    def test_t_one_is_f(self, rng):
        for _ in range(3):
            f = random_map(rng, rng.choice((1, 2)))
            fl = formal_flow(f, 6)
            assert fl.at(1).eq_through(f.map.truncate(6), 6)

    def test_t_minus_one_is_tree_inverse(self, rng):
        for _ in range(3):
            f = random_map(rng, rng.choice((1, 2)))
            fl = formal_flow(f, 6)
            assert fl.at(-1).eq_through(invert_bcw(f, 6), 6)

    def test_integer_points_match_iterates(self, catalan_map):
        fl = formal_flow(catalan_map, 6)
        for m in (-2, -1, 0, 1, 2, 3):
            assert fl.at(m).eq_through(power_map(catalan_map, m, 6), 6)

    def test_group_law_at_integers(self, rng):
        f = random_map(rng, 2, max_deg=3)
        fl = formal_flow(f, 6)
        for a in (-1, 0, 1, 2):
            for b in (-1, 0, 1, 2):
                if abs(a) + abs(b) > 3:
                    continue
                lhs = fl.at(a).compose(fl.at(b), cap=6)
                assert lhs.eq_through(fl.at(a + b), 6)

    def test_tpoly_view(self, catalan_map):
        coeffs = formal_flow(catalan_map, 3).tpoly_coefficients()
        assert coeffs[0][(2,)].coeffs == (0, -1)

    def test_group_law_symbolically(self, rng):
        # F(F(z; s); t) = F(z; t+s) as a polynomial identity in t AND s,
        # not just at integer points
        for _ in range(2):
            n = rng.choice((1, 2))
            f = random_map(rng, n, max_deg=3)
            fl = formal_flow(f, 5)
            in_t = PolyMap(
                [c.with_params(1) for c in fl.map.components]
            )  # params (t, s)
            in_s = PolyMap(
                [
                    MSeries(
                        n,
                        c.trunc,
                        {e[:n] + (e[n + 1], e[n]): v for e, v in c.terms.items()},
                        2,
                    )
                    for c in in_t.components
                ]
            )
            lhs = in_t.compose(in_s, cap=5)
            rhs = PolyMap(
                [c.subst_param_sum(0, 1) for c in in_t.components]
            )  # t := t + s
            assert lhs.eq_through(rhs.truncate(lhs.trunc), min(5, lhs.trunc))


class TestPowerMap:
    def test_zero_power(self, catalan_map):
        assert power_map(catalan_map, 0, 5).is_identity_through(5)

    def test_minus_one_is_inverse(self, catalan_map):
        g = power_map(catalan_map, -1, 6)
        assert f"{g.components[0].format()}".startswith("z + z^2 + 2*z^3")

    def test_square(self, catalan_map):
        p2 = power_map(catalan_map, 2, 5)
        assert p2.components[0].terms == {(1,): 1, (2,): -2, (3,): 2, (4,): -1}

    def test_inverse_powers_compose(self, catalan_map):
        p = power_map(catalan_map, 3, 5)
        q = power_map(catalan_map, -3, 5)
        assert p.compose(q, cap=5).is_identity_through(5)


class TestProbe:
    def test_cubic_shear(self):
        h = PolyMap([mono(2, (0, 3)), MSeries.zero(2)])
        report = polynomiality_probe(h, 6)
        assert report.last_nonzero_layer == 1
        assert report.vanished_within_bound

    def test_quadratic_nilpotent_terminates(self, shear_map):
        report = polynomiality_probe(shear_map.h, 8)
        assert report.vanished_within_bound

    def test_three_var_cascade(self):
        # H = (z2^2 + z3^2, z3^2, 0): JH strictly upper triangular
        h = PolyMap(
            [
                mono(3, (0, 2, 0)) + mono(3, (0, 0, 2)),
                mono(3, (0, 0, 2)),
                MSeries.zero(3),
            ]
        )
        report = polynomiality_probe(h, 8)
        assert report.vanished_within_bound
        assert report.last_nonzero_layer >= 2

    def test_rejects_non_nilpotent(self, catalan_map):
        with pytest.raises(NilpotencyError):
            polynomiality_probe(catalan_map.h, 4)


class TestSymmetryDetector:
    def test_gradient_map(self):
        # H = grad(z1^2 z2) = (2 z1 z2, z1^2)
        h = PolyMap([mono(2, (1, 1), 2), mono(2, (2, 0))])
        symmetric, note = symmetry_detector(h)
        assert symmetric
        assert "Burgers" in note

    def test_shear_is_not_symmetric(self, shear_map):
        symmetric, note = symmetry_detector(shear_map.h)
        assert not symmetric

    def test_one_var_always_symmetric(self, catalan_map):
        assert symmetry_detector(catalan_map.h)[0]
