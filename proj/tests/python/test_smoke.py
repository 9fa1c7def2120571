import cmath
from fractions import Fraction

import pytest

import qortho


def test_exact_recurrence():
    t = qortho.exact_recurrence(q="1/2", n_max=8)
    assert t["a"][0] is None
    assert t["a"][1] == Fraction(4, 7)
    assert t["a"][3] == Fraction(784, 3937)
    for n in range(1, 9):
        assert t["gamma"][n] / t["gamma"][n - 1] == t["a"][n]
    assert all(b == 0 for b in t["b"])


def test_hp_recurrence_agrees_with_exact():
    hp = qortho.recurrence(q="1/3", n_max=8)
    ex = qortho.exact_recurrence(q="1/3", n_max=8)
    for g_hp, g_ex in zip(hp["gamma"], ex["gamma"]):
        assert float(g_hp) == pytest.approx(float(g_ex), rel=1e-14)


def test_pochhammer():
    # (1/2; 1/2)_inf
    assert qortho.pochhammer_inf(0.5, "1/2").real == pytest.approx(0.2887880950866024, rel=1e-14)
    assert abs(qortho.pochhammer_inf(1.0, "1/2")) == 0.0


def test_model_solution():
    sol = qortho.ModelSolution(bits=256, j_max=80)
    assert sol.psi(0).real == pytest.approx(0.4194224417951076, rel=1e-14)
    for t in (0.3, 1.7j, -2.4 + 0.3j):
        assert sol.det_residual(t) < 1e-25
        assert sol.connection_residual(t) < 1e-25
    assert float(sol.smallest_zero()) == pytest.approx(1.3110257698704053, rel=1e-14)
    assert float(sol.C0) == pytest.approx(2.109331102736612, rel=1e-14)
    assert cmath.isfinite(sol.rho(0.45 + 0.2j))


def test_verify_theorem2():
    r = qortho.verify("theorem2", n_max=16)
    assert r["passed"] is True
    assert r["leading_constant"] == "squared"


def test_bad_input_raises():
    with pytest.raises(ValueError, match="bad_input"):
        qortho.recurrence(q="3/2")
    with pytest.raises(KeyError):
        qortho.run("recurrence", n_maximum=3)
