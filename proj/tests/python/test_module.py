import math

import pytest

import twomode


def test_version():
    assert twomode.__version__ == "0.3.0"


def test_phase_classification_and_entropy():
    c = twomode.classify_phase(twomode.ModelParams(omega=1.0, w=1.1, g=0.01))
    assert c.phase == "condensate"
    assert c.n_alpha == 5
    assert twomode.fock_condensate_entropy(1) == pytest.approx(math.log(2.0), abs=1e-15)


def test_mean_field_reference_point():
    p = twomode.ModelParams(omega=1.0, w=2.0, g=0.1, lam=0.11)
    sol = twomode.stationary_amplitude(p)
    assert sol.branch == "superfluid"
    assert sol.nu == pytest.approx(2.179976222307879, abs=1e-12)
    b = twomode.bogoliubov_params(p, sol)
    assert twomode.squeezed_ground_entropy(b.theta) == pytest.approx(0.5819929138242857, abs=1e-12)


def test_dynamics_matches_oracle():
    p = twomode.ModelParams(omega=1.0, w=2.0, g=0.1, lam=0.11, nu_prime=0.3)
    times = [0.0, 0.5, 1.0]
    gauss = twomode.dynamical_entropy(p, times)
    oracle = twomode.fock_oracle_entropy(p, times)
    assert gauss[0] == pytest.approx(0.0, abs=1e-12)
    for a, b in zip(gauss, oracle):
        assert a == pytest.approx(b, abs=1e-8)


def test_run_returns_columns():
    out = twomode.run("sbf", sweep="w:0.6:1.4:3", jobs=1)
    assert list(out)[:3] == ["ratio", "nu", "branch"]
    assert len(out["ratio"]) == 3


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        twomode.ModelParams(g=-1.0)
    with pytest.raises(twomode.ConfigError):
        twomode.run("phase", sweep="bogus:1:2:3")
    with pytest.raises(twomode.ConfigError):
        twomode.run("nothing")


def test_check_group_quick():
    checks = twomode.check_group("AC7")
    assert checks and all(c["passed"] for c in checks)
