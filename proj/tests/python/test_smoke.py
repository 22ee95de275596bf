import math

import pytest

import escrate


def test_intrinsic_radius_round_trip():
    coeff = escrate.RadialCoefficient.power(1.0)
    assert escrate.rho_tilde(coeff, 3.0) == pytest.approx(2.0, rel=1e-12)
    assert escrate.rho_tilde_inverse(coeff, 2.0) == pytest.approx(3.0, rel=1e-10)


def test_phi_psi_inverse_pair():
    profile = escrate.power_volume_profile(3.0)
    t = escrate.phi(profile, 10.0)
    assert t == pytest.approx(8.32968593261403843, rel=1e-9)
    assert escrate.psi(profile, t) == pytest.approx(10.0, rel=1e-9)


def test_drift_rate_with_python_callable():
    # t = int_1^g dx = g - 1
    assert escrate.drift_rate(lambda x: 1.0, 1.0, 5.0) == pytest.approx(6.0, rel=1e-10)


def test_verdicts_and_closed_forms():
    assert escrate.conservativeness(escrate.RadialCoefficient.power(3.0)) == "NonConservative"
    assert escrate.conservativeness(escrate.RadialCoefficient.squared_log(1.0)) == "Conservative"
    psi, psi_tilde = escrate.closed_form_rate("diri1", math.e**2)
    assert psi == pytest.approx(math.e * math.sqrt(2.0))
    assert psi_tilde == pytest.approx(psi)
    assert escrate.closed_form_rate("g_alpha", 4.0, -0.5)[1] is None


def test_errors_carry_their_kind():
    with pytest.raises(escrate.EscrateError) as info:
        escrate.psi(escrate.profile_from_radial(escrate.RadialCoefficient.power(3.0), 2), 1e9)
    assert info.value.kind == "FiniteTotalIntegral"
    with pytest.raises(escrate.EscrateError) as info:
        escrate.run_command("[model]\nbogus = 1\n", "rate")
    assert info.value.kind == "ConfigError"


def test_simulate_is_deterministic():
    config = (
        "[model]\nfamily = hyperbolic\n"
        "[simulation]\nx0 = 1\nT = 0.1\ndt = 0.01\nn_paths = 8\nmaster_seed = 9\nfloor = 0.05\n"
    )
    code, csv, _ = escrate.run_command(config, "simulate")
    assert code == 0
    assert csv.splitlines()[0] == "path,step,t,x"
    assert len(csv.splitlines()) == 1 + 8 * 11
    assert escrate.run_command(config, "simulate")[1] == csv


def test_verify_dyadic_reports_pass():
    code, _, report = escrate.run_command(
        "[model]\nfamily = constant\n[verify]\nc = 4\nlevels = 30\n", "verify", "dyadic"
    )
    assert code == 0
    assert report.startswith("PASS")
