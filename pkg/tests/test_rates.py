import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import mpref
from cavrate import multilayer as ml
from cavrate import oracle, rates
from cavrate.errors import DomainError, ExpansionRangeWarning
from conftest import passive_eps_samples

EPS_RES = 5 + 2.5j  # oscillator medium at its absorption resonance

bounded_eps = st.builds(
    complex,
    st.floats(min_value=-3.0, max_value=10.0),
    st.floats(min_value=0.0, max_value=5.0),
).filter(lambda e: abs(e) >= 0.05 and abs(2 * e + 1) >= 1.0)


class TestLocalFieldFactors:
    def test_vacuum(self):
        assert rates.lorentz_factor(1.0) == 1.0
        assert rates.onsager_factor(1.0) == 1.0

    def test_reference_values(self):
        assert rates.onsager_factor(5.0) == pytest.approx((15 / 11) ** 2,
                                                          rel=1e-15)
        assert rates.lorentz_factor(5.0) == pytest.approx((7 / 3) ** 2,
                                                          rel=1e-15)

    def test_pole(self):
        with pytest.raises(DomainError):
            rates.onsager_factor(-0.5)


class TestGamma0Macroscopic:
    def test_lossless_reduces_to_eta(self):
        assert rates.gamma0_macroscopic(5.0, 1.0, 0.01) \
            == pytest.approx(math.sqrt(5), rel=1e-15)
        assert rates.gamma0_macroscopic(5.0, 1.0, 7.0) \
            == pytest.approx(math.sqrt(5), rel=1e-15)

    def test_hand_substitution(self):
        # independent route: eta from the half-angle form of the root,
        # near-field term assembled from scratch
        eps, k0, r_m = EPS_RES, 1.0, 0.6283
        eta = math.sqrt((abs(eps) + eps.real) / 2)
        expected = 1.5 * eps.imag / abs(eps) ** 2 / (k0 * r_m) ** 3 + eta
        assert rates.gamma0_macroscopic(eps, k0, r_m) \
            == pytest.approx(expected, rel=1e-14)

    def test_rm_validation(self):
        with pytest.raises(DomainError):
            rates.gamma0_macroscopic(5.0, 1.0, 0.0)


class TestW0:
    def test_lossless_cutoff_value(self):
        assert rates.w0_cutoff(4.0, 1.0, 0.37) == pytest.approx(2.0, rel=1e-15)

    def test_matches_poynting_oracle(self, rng):
        for eps in passive_eps_samples(rng, 5):
            eps += 0.2j  # keep a visible absorption signal
            k0 = 1.0
            for x in (0.4, 1.1):
                fields = ml.homogeneous_field(eps, k0)
                r = x + 1.5
                quadr = oracle.flux_through_sphere(fields, r, k0) \
                    + oracle.absorbed_power(fields, x, r, eps, k0)
                assert quadr == pytest.approx(rates.w0_cutoff(eps, k0, x),
                                              rel=1e-8)

    def test_expansion_first_omitted_order_is_linear(self):
        # difference from the exact cutoff form shrinks linearly
        xs = (1e-1, 1e-2, 1e-3)
        diffs = [abs(rates.w0_cutoff(EPS_RES, 1.0, x)
                     - rates.w0_expanded(EPS_RES, 1.0, x)) for x in xs]
        slope = np.polyfit(np.log(xs), np.log(diffs), 1)[0]
        assert slope == pytest.approx(1.0, abs=0.1)

    def test_expansion_lossless_is_eta(self):
        assert rates.w0_expanded(4.0, 1.0, 0.01) == pytest.approx(2.0,
                                                                  rel=1e-15)

    def test_cutoff_free_term_persists(self):
        # after removing the diverging terms, the limit is eta plus a
        # nonzero absorption offset
        eps, k0 = EPS_RES, 1.0
        eta, kappa = mpref.sqrt_eps(eps).real, mpref.sqrt_eps(eps).imag
        offset = -2 / 3 * (float(eta) * eps.imag + float(kappa) * eps.real) \
            * eps.imag / abs(eps) ** 2
        assert offset != 0
        pref = eps.imag / abs(eps) ** 2
        for x in (1e-1, 1e-2):
            remainder = rates.w0_expanded(eps, k0, x) \
                - pref * (x ** -3 + eps.real / x)
            assert remainder == pytest.approx(float(eta) + offset, rel=1e-9)
        # the exact cutoff form approaches the same nonzero limit
        remainder = rates.w0_cutoff(eps, k0, 1e-2) \
            - pref * (1e-2 ** -3 + eps.real / 1e-2)
        assert remainder == pytest.approx(float(eta) + offset, abs=0.05)
        assert abs(remainder - float(eta)) > 0.05

    def test_expansion_warns_outside_range(self):
        with pytest.warns(ExpansionRangeWarning):
            rates.w0_expanded(EPS_RES, 1.0, 0.35)
        with pytest.warns(ExpansionRangeWarning):
            rates.gamma0_loc(EPS_RES, 1.0, 0.7)


class TestGamma0Loc:
    def test_lossless_collapse(self, rng):
        for _ in range(10):
            eps = complex(rng.uniform(1, 9), 0)
            eta = math.sqrt(eps.real)
            expected = rates.onsager_factor(eps) * eta
            assert abs(rates.gamma0_loc(eps, 1.0, 0.01) - expected) < 1e-13

    def test_reference_value_at_eps_5(self):
        expected = (15 / 11) ** 2 * math.sqrt(5)
        assert rates.gamma0_loc(5.0, 1.0, 0.2 * math.pi) \
            == pytest.approx(expected, rel=1e-14)

    def test_matches_exact_cavity_coefficient(self):
        # exact empty-cavity amplitude, residual is first order in k0 r_c
        eps, k0 = EPS_RES, 1.0
        for x, bound in ((1e-2, 0.1), (1e-3, 0.01)):
            coeffs = ml.coeffs_two_layer(1.0, eps, x / k0, k0)
            assert abs(1 + coeffs.c1.real - rates.gamma0_loc(eps, k0, x / k0)) \
                < bound

    def test_matches_mp_expansion(self, rng):
        for eps in passive_eps_samples(rng, 10):
            got = rates.gamma0_loc(eps, 1.0, 0.01)
            ref = float(mpref.gamma0_loc_expansion(eps, mpref.mp.mpf("0.01")))
            assert got == pytest.approx(ref, rel=1e-13)


class TestPEffExpansion:
    def test_static_limit(self):
        eps = EPS_RES
        got = rates.p_eff_expansion(eps, 1.0, 1e-9)
        assert got == pytest.approx(3 * eps / (2 * eps + 1), rel=1e-12)

    def test_vacuum_is_exactly_one(self):
        for x in (1e-3, 1e-2, 0.1):
            assert rates.p_eff_expansion(1.0, 1.0, x) == 1.0

    def test_matches_exact_transmitted_amplitude(self):
        eps, k0 = EPS_RES, 1.0
        for x, bound in ((3e-2, 1e-5), (1e-2, 2e-7)):
            coeffs = ml.coeffs_two_layer(1.0, eps, x / k0, k0)
            exact = coeffs.c_outer / eps
            assert abs(exact - rates.p_eff_expansion(eps, k0, x / k0)) < bound


class TestGammaHatTotal:
    def test_free_space(self):
        stack = ml.LayerStack((1.0,), (1.0, 1.0))
        assert rates.gamma_hat_total(stack, 1.0) == pytest.approx(1.0,
                                                                  abs=1e-12)

    def test_requires_vacuum_core(self):
        stack = ml.LayerStack((1.0,), (2.0, 1.0))
        with pytest.raises(DomainError):
            rates.gamma_hat_total(stack, 1.0)

    def test_two_layer_agrees_with_expansion(self):
        eps, k0, x = EPS_RES, 1.0, 1e-3
        stack = ml.LayerStack((x / k0,), (1.0, eps))
        assert abs(rates.gamma_hat_total(stack, k0)
                   - rates.gamma0_loc(eps, k0, x / k0)) < 0.01

    def test_three_layer_decomposes(self):
        eps, k0, x, radius = EPS_RES, 1.0, 1e-3, 2.0
        stack = ml.LayerStack((x / k0, radius), (1.0, eps, 1.0))
        split = rates.gamma0_loc(eps, k0, x / k0) \
            + rates.gamma_sc_loc(eps, 1.0, radius, k0)
        assert abs(rates.gamma_hat_total(stack, k0) - split) < 0.01

    @given(bounded_eps,
           st.floats(min_value=0.005, max_value=0.9))
    def test_total_rate_positive_for_passive_media(self, eps, k0_r):
        # a dipole in a vacuum bubble inside any passive medium can only
        # lose energy
        stack = ml.LayerStack((k0_r,), (1.0, eps))
        assert rates.gamma_hat_total(stack, 1.0) > -1e-10


class TestCavityRates:
    def test_no_sphere_no_rate(self):
        assert rates.gamma_sc(3.0, 3.0, 2.0, 1.0) == pytest.approx(0, abs=1e-14)
        assert rates.delta_sc(3.0, 3.0, 2.0, 1.0) == pytest.approx(0, abs=1e-14)

    def test_radius_sits_near_first_peak(self):
        # lossless reference sphere: the first local maximum of the
        # corrected cavity rate against k0 R falls close to k0 R = 2
        ks = np.linspace(0.05, 1.4, 2701)
        vals = np.array([rates.gamma_sc_loc(5.0, 1.0, 2.0, k) for k in ks])
        interior = (vals[1:-1] > vals[:-2]) & (vals[1:-1] > vals[2:])
        first = np.flatnonzero(interior)[0] + 1
        assert 2.0 * ks[first] == pytest.approx(2.0, abs=0.1)

    def test_total_radiated_power_non_negative_lossless(self):
        eta = math.sqrt(5)
        for k0r in np.linspace(0.1, 20, 250):
            assert rates.gamma_sc(5.0, 1.0, 2.0, k0r / 2.0) + eta > 0

    def test_lossless_collapse(self):
        for eps in (2.0, 5.0, 8.5):
            factor = rates.onsager_factor(eps)
            g_sc = rates.gamma_sc(eps, 1.0, 2.0, 1.0)
            g_sc_loc = rates.gamma_sc_loc(eps, 1.0, 2.0, 1.0)
            assert abs(g_sc_loc - factor * g_sc) < 1e-13 * max(1, abs(g_sc))

    def test_both_corrected_forms_agree(self, rng):
        from cavrate.dielectric import sqrt_eps
        for eps in passive_eps_samples(rng, 50):
            radius, k0 = rng.uniform(0.5, 4), rng.uniform(0.5, 2)
            coeffs = ml.coeffs_two_layer(eps, 1.0, radius, k0)
            root_c1 = sqrt_eps(eps) * coeffs.c1
            direct = rates.gamma_sc_loc(eps, 1.0, radius, k0,
                                        check_identity=False)
            alt = rates.gamma_sc_loc_from_bare(eps, root_c1.real,
                                               0.5 * root_c1.imag)
            assert abs(direct - alt) <= 1e-12 * max(1.0, abs(direct))

    def test_extraction_from_interface_determinants(self, rng):
        # finite part of the small-cavity series: the corrected rate is
        # Re of the eps^{5/2} factor times minus twice b1/(b1+b2)
        from cavrate.dielectric import eps_pow_5_2
        for eps in passive_eps_samples(rng, 10):
            radius, k0 = rng.uniform(0.8, 3), 1.0
            _, (b1, b2) = ml.three_layer_interface_terms(
                1.0, eps, 1.0, 1e-4, radius, k0)
            expected = (9 * eps_pow_5_2(eps) / (2 * eps + 1) ** 2
                        * (-2 * b1 / (b1 + b2))).real
            assert rates.gamma_sc_loc(eps, 1.0, radius, k0) \
                == pytest.approx(expected, rel=1e-10)


class TestCutoffFreeIdentity:
    def test_vacuum(self):
        lhs, rhs = rates.identity_rep_decomposition(1.0)
        assert lhs == pytest.approx(1.0, rel=1e-15)
        assert rhs == pytest.approx(1.0, rel=1e-15)

    def test_reference_point(self):
        lhs, rhs = rates.identity_rep_decomposition(EPS_RES)
        assert abs(lhs - rhs) < 1e-13

    @given(bounded_eps)
    def test_identity_everywhere(self, eps):
        lhs, rhs = rates.identity_rep_decomposition(eps)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


class TestExternal:
    def test_uniform_stack_is_bare_dipole(self):
        stack = ml.LayerStack((0.5, 1.0), (2 + 1j, 2 + 1j, 2 + 1j))
        assert rates.external_dipole(stack, 1.0) == pytest.approx(1.0,
                                                                  rel=1e-12)

    def test_cavity_scaling_reaches_static_factor(self):
        eps, radius, k0 = EPS_RES, 2.0, 1.0
        bare = ml.coeffs_two_layer(eps, 1.0, radius, k0)
        p_bare = eps / 1.0 * bare.c_outer
        residuals = []
        for x in (1e-2, 1e-3, 1e-4):
            stack = ml.LayerStack((x / k0, radius), (1.0, eps, 1.0))
            ratio = rates.external_dipole(stack, k0) / p_bare
            residuals.append(abs(ratio / (3 * eps / (2 * eps + 1)) - 1))
        slope = np.polyfit(np.log([1e-2, 1e-3, 1e-4]), np.log(residuals), 1)[0]
        assert slope == pytest.approx(2.0, abs=0.15)
        # squared modulus of the scaling gives the power factor
        stack = ml.LayerStack((1e-3 / k0, radius), (1.0, eps, 1.0))
        ratio = rates.external_dipole(stack, k0) / p_bare
        assert abs(ratio) ** 2 == pytest.approx(rates.onsager_factor(eps),
                                                rel=1e-4)

    def test_angular_pattern(self):
        stack = ml.LayerStack((0.6, 2.0), (1.0, EPS_RES, 1.0))
        k0 = 1.0
        assert rates.angular_radiation(stack, k0, 3.0, 0.0) == 0.0
        full = rates.angular_radiation(stack, k0, 3.0, math.pi / 2)
        half = rates.angular_radiation(stack, k0, 3.0, math.pi / 4)
        assert half / full == pytest.approx(0.5, rel=1e-14)

    def test_lossless_exterior_integral_matches_power(self):
        stack = ml.LayerStack((0.6, 2.0), (1.0, EPS_RES, 1.0))
        k0 = 1.0
        u, w = np.polynomial.legendre.leggauss(8)
        theta = np.arccos(u)
        for r in (2.0, 5.0, 9.0):
            integral = 2 * math.pi * np.dot(
                w, rates.angular_radiation(stack, k0, r, theta))
            assert integral == pytest.approx(
                rates.external_power(stack, k0, r), rel=1e-12)

    def test_matches_oracle_flux(self):
        stack = ml.LayerStack((0.6, 2.0), (1.0, EPS_RES, 1.2 + 0.4j))
        k0 = 1.0
        fields = ml.stack_field_evaluator(stack, k0)
        for r in (2.0, 3.5):
            assert oracle.flux_through_sphere(fields, r, k0) \
                == pytest.approx(rates.external_power(stack, k0, r), rel=1e-8)

    def test_observation_inside_sphere_rejected(self):
        stack = ml.LayerStack((0.6, 2.0), (1.0, EPS_RES, 1.0))
        with pytest.raises(DomainError):
            rates.external_power(stack, 1.0, 1.5)
        with pytest.raises(DomainError):
            rates.angular_radiation(stack, 1.0, 1.5, 0.3)


class TestGreenRestatement:
    def test_rate_from_raw_field(self):
        # scattered Green element reconstructed from a field evaluation
        # near the origin reproduces the closed-form cavity rate
        for eps, eps_ext, radius, k0 in ((EPS_RES, 1.0, 2.0, 1.0),
                                         (3 + 0.5j, 1.5 + 0.1j, 1.3, 0.8)):
            stack = ml.LayerStack((radius,), (eps, eps_ext))
            coeffs = ml.coefficients(stack, k0)
            e_r, _, _ = ml.field_in_layer(stack, coeffs, 1e-8 / k0, 0.0, k0,
                                          include_source=False)
            g_zz = complex(e_r) / (k0 * k0)
            assert 3 / (2 * k0) * g_zz.imag \
                == pytest.approx(rates.gamma_sc(eps, eps_ext, radius, k0),
                                 rel=1e-10)


class TestApproxRates:
    def test_lossless_forms_are_exact(self):
        eps, radius, k0, r_c = 5.0, 2.0, 1.0, 0.05
        g_sc = rates.gamma_sc(eps, 1.0, radius, k0)
        exact = rates.gamma0_loc(eps, k0, r_c) \
            + rates.gamma_sc_loc(eps, 1.0, radius, k0)
        for mode in ("resonance", "intermediate"):
            approx = rates.approx_rates(eps, g_sc, k0, r_c, mode)
            assert approx == pytest.approx(exact, rel=1e-13)

    def test_mode_validation(self):
        with pytest.raises(DomainError):
            rates.approx_rates(5.0, 0.1, 1.0, 0.05, "bogus")

    def test_resonance_region_report(self):
        # radiative shorthand against the exact corrected rate over the
        # resonance window of the standard absorbing sphere; the product
        # of the static factor with the uncorrected rate is the pair that
        # overlaps at the percent level
        import warnings

        from cavrate import cli
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            config = cli.get_preset("fig3")
            rows = [r for r in cli.run_sweep(config)
                    if 0.8 <= r["omega"] <= 1.2]
        worst_short = max(
            abs(rates.approx_rates(complex(r["eps_re"], r["eps_im"]),
                                   r["gamma_sc_hat"], r["omega"],
                                   config.onsager_radius(r["omega"]),
                                   "resonance")
                - r["gamma_loc_hat"]) / abs(r["gamma_loc_hat"])
            for r in rows)
        worst_naive = max(
            abs(r["naive_loc_hat"] - r["gamma_loc_hat"])
            / abs(r["gamma_loc_hat"]) for r in rows)
        print(f"resonance window: radiative shorthand within {worst_short:.3f}"
              f", factor-times-total within {worst_naive:.3f} of exact")
        assert worst_short < 0.25   # absorption terms are visible but modest
        assert worst_naive < 0.03   # overlapping curves on any plot scale

    def test_nearfield_ratio_is_three_halves(self):
        for eps in (EPS_RES, 2 + 0.3j, 7 + 4j):
            for x in (0.03 * 2 * math.pi, 0.1):
                ratio = rates.nonradiative_nearfield(eps, 1.0, x) \
                    / rates.cavity_nearfield(eps, 1.0, x)
                assert abs(ratio - 1.5) <= 1e-12


class TestRateReport:
    def test_definitional_invariants(self):
        report = rates.rate_report(EPS_RES, 1.0, 2.0, 0.2 * math.pi,
                                   0.2 * math.pi, 1.0)
        assert report.gamma_loc_hat \
            == report.gamma0_loc_hat + report.gamma_sc_loc_hat
        assert report.w_ext_loc_hat \
            == report.onsager_factor * report.w_ext_hat
        assert report.gamma_hat == report.gamma0_hat + report.gamma_sc_hat
        for value in (report.gamma0_hat, report.gamma0_loc_hat,
                      report.gamma_sc_loc_hat, report.gamma_loc_hat,
                      report.w_ext_hat, report.w_ext_loc_hat):
            assert math.isfinite(value)

    def test_lossless_external_factor(self):
        report = rates.rate_report(5.0, 1.0, 2.0, 0.05, 0.05, 1.0)
        assert report.w_ext_loc_hat \
            == pytest.approx(rates.onsager_factor(5.0) * report.w_ext_hat,
                             rel=1e-15)
