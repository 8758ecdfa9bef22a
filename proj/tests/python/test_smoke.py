import math

import pytest

import ctrlcap


def test_thm2_values():
    v = ctrlcap.thm2(5000, 1, 24)
    assert v["t_quad"] == pytest.approx((5000 - 2) ** 2 / 24)
    assert v["bound"] == pytest.approx(4 * v["t_quad"] * math.exp(-24))


def test_closed_forms():
    assert ctrlcap.cap_closed_form("interval:-1,1") == pytest.approx(0.5)
    assert ctrlcap.cap_closed_form("disk:0,0,0.7") == pytest.approx(0.7)


def test_err_on_disk_is_power_of_radius():
    r = ctrlcap.err(6, "disk:0,0,0.5")
    assert abs(r["error"] - 0.5**6) <= r["certified_gap"] + 1e-12


def test_phi_below_hoeffding():
    assert ctrlcap.phi(20, 8)["error"] <= ctrlcap.phi_hoeffding(20, 8)


def test_system_round_trip_and_energy():
    sys = ctrlcap.generate(6, 2, "disk:0,0,0.6", cond=10, seed=3)
    rep = ctrlcap.gramian(sys, 5)
    lam = float(rep["lambda_min"]["value"])
    energy = float(ctrlcap.control_energy(sys, 6)["value"])
    assert energy == pytest.approx(1 / lam, rel=1e-9)


def test_verify_thm1_holds():
    v = ctrlcap.verify_thm1(8, 2, "disk:0,0,0.8", cond=10, seed=2)
    assert v["report"]["holds"] is True


def test_errors_carry_kind():
    with pytest.raises(ctrlcap.CtrlcapError, match="HypothesisViolated"):
        ctrlcap.thm2(2, 1, 1.0)


def test_cli_entry_point(capsys):
    assert ctrlcap.main(["thm2", "--m", "10", "--q", "1"]) == 0
