import json
import math
from fractions import Fraction

import pytest

from satcuma.scenario import (SPEED_OF_LIGHT, AntennaConfig, LinkBudget,
                              ScenarioError, UserField, build_scenario,
                              db_to_linear, nominal_snr, path_loss_coeff,
                              table_default_config)


class TestPathLoss:
    def test_rounded_wavelength_convention(self):
        # lambda = 0.01 m exactly (c rounded to 3e8 at 30 GHz), r = 1200 km
        zeta = path_loss_coeff(30e9, 1.2e6, speed_of_light=3e8)
        assert zeta == pytest.approx(4.397620817809799e-19, rel=1e-12)

    def test_exact_light_speed_convention(self):
        zeta = path_loss_coeff(30e9, 1.2e6)
        assert zeta == pytest.approx(4.391538315697107e-19, rel=1e-12)

    def test_table_values_within_band(self):
        # both conventions land in the same narrow band
        for c in (3e8, SPEED_OF_LIGHT):
            zeta = path_loss_coeff(30e9, 1.2e6, speed_of_light=c)
            assert 4.3e-19 <= zeta <= 4.5e-19

    def test_unit_path_loss_distance(self):
        lam = SPEED_OF_LIGHT / 30e9
        assert path_loss_coeff(30e9, lam / (4 * math.pi)) == pytest.approx(1.0, rel=1e-12)

    def test_monotone_in_distance_and_frequency(self):
        assert path_loss_coeff(30e9, 1e6) > path_loss_coeff(30e9, 2e6)
        assert path_loss_coeff(20e9, 1e6) > path_loss_coeff(30e9, 1e6)

    def test_domain_errors(self):
        with pytest.raises(ScenarioError):
            path_loss_coeff(-1.0, 1.0)
        with pytest.raises(ScenarioError):
            path_loss_coeff(30e9, 0.0)


class TestLinkBudget:
    def test_table_noise_and_snr(self):
        b = LinkBudget()
        assert b.noise_power == pytest.approx(2.85867e-14, rel=1e-9)
        assert nominal_snr(b) == pytest.approx(3.4981302493817055e17, rel=1e-12)

    def test_doubling_bandwidth_halves_snr(self):
        b1, b2 = LinkBudget(B=1e7), LinkBudget(B=2e7)
        assert nominal_snr(b2) == pytest.approx(nominal_snr(b1) / 2, rel=1e-14)

    def test_dbi_conversion(self):
        assert db_to_linear(40.0) == pytest.approx(1e4, rel=1e-14)

    def test_scaling_invariance(self):
        # P -> cP, G -> G/c leaves the nominal SNR unchanged
        c = 7.3
        b1 = LinkBudget(P=1.0, G=1e4)
        b2 = LinkBudget(P=c, G=1e4 / c)
        assert nominal_snr(b1) == pytest.approx(nominal_snr(b2), rel=1e-14)

    def test_positive_field_validation(self):
        with pytest.raises(ScenarioError, match="T"):
            LinkBudget(T=-1.0)


class TestAntennaConfig:
    def test_density_is_exact_rational(self):
        cfg = AntennaConfig(K=61, W=3)
        assert cfg.mu == Fraction(20)
        assert cfg.mu_is_even_integer
        assert cfg.kbar == 30

    def test_mu_times_w_plus_one_is_k(self):
        for k in range(2, 120):
            for w in range(1, 6):
                cfg = AntennaConfig(K=k, W=w)
                assert cfg.mu * w + 1 == k

    def test_evenness_flag(self):
        assert AntennaConfig(K=9, W=2).mu_is_even_integer         # mu = 4
        assert not AntennaConfig(K=10, W=3).mu_is_even_integer    # mu = 3
        assert not AntennaConfig(K=8, W=2).mu_is_even_integer     # mu = 7/2

    def test_bounds(self):
        with pytest.raises(ScenarioError):
            AntennaConfig(K=1, W=1)
        with pytest.raises(ScenarioError):
            AntennaConfig(K=5, W=0)


class TestUserField:
    def test_phase_support_validation(self):
        with pytest.raises(ScenarioError, match="psi"):
            UserField(U=1, zeta=(1.0,), psi=(0.0,))
        with pytest.raises(ScenarioError, match="psi"):
            UserField(U=1, zeta=(1.0,), psi=(2 * math.pi,))

    def test_alignment_enforced(self):
        with pytest.raises(ScenarioError, match="alignment"):
            UserField(U=1, zeta=(1.0,), psi=(1.0,), theta=1.0)

    def test_positive_zeta(self):
        with pytest.raises(ScenarioError, match="zeta"):
            UserField(U=2, zeta=(1.0, 0.0), psi=(1.0, 2.0))


class TestBuildScenario:
    def test_reference_geometry(self):
        sc = build_scenario(table_default_config(K=61, W=3, U=5))
        assert sc.antenna.mu == 20
        assert sc.Kbar == 30
        assert sc.warnings == ()

    def test_small_even_geometry(self):
        sc = build_scenario({"K": 9, "W": 2, "U": 1})
        assert sc.antenna.mu == 4
        assert sc.Kbar == 4

    def test_odd_density_builds_with_warning(self):
        sc = build_scenario({"K": 10, "W": 3, "U": 2})
        assert sc.antenna.mu == 3
        assert "odd-mu" in sc.warnings

    def test_unknown_key_is_hard_error(self):
        with pytest.raises(ScenarioError, match="unknown"):
            build_scenario({"K": 9, "W": 2, "U": 1, "rain_db": 3.0})

    def test_missing_key(self):
        with pytest.raises(ScenarioError, match="U"):
            build_scenario({"K": 9, "W": 2})

    def test_per_user_distances(self):
        sc = build_scenario({"K": 9, "W": 2, "U": 3,
                             "distance_m": [1.2e6, 1.5e6, 2.0e6]})
        assert sc.users.zeta[0] > sc.users.zeta[1] > sc.users.zeta[2]

    def test_distance_list_length_checked(self):
        with pytest.raises(ScenarioError, match="distance_m"):
            build_scenario({"K": 9, "W": 2, "U": 3, "distance_m": [1.0, 2.0]})

    def test_json_file_round_trip(self, tmp_path):
        path = tmp_path / "scenario.json"
        path.write_text(json.dumps({"K": 21, "W": 2, "U": 5, "seed": 3}))
        sc = build_scenario(str(path))
        assert sc.antenna.K == 21
        assert sc.seed == 3

    def test_parse_failure(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{K: 21")
        with pytest.raises(ScenarioError, match="parse"):
            build_scenario(str(path))

    def test_phase_draw_deterministic(self):
        a = build_scenario({"K": 9, "W": 2, "U": 4, "seed": 11})
        b = build_scenario({"K": 9, "W": 2, "U": 4, "seed": 11})
        assert a.users.psi == b.users.psi
        c = build_scenario({"K": 9, "W": 2, "U": 4, "seed": 12})
        assert a.users.psi != c.users.psi

    def test_derived_phase_mapping(self):
        sc = build_scenario({"K": 9, "W": 2, "U": 1})
        assert sc.derived.t == pytest.approx(0.75 - sc.users.psi[0] / (2 * math.pi))

    def test_immutability(self):
        sc = build_scenario({"K": 9, "W": 2, "U": 1})
        with pytest.raises(AttributeError):
            sc.antenna = None
