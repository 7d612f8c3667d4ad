import math

import pytest

import semijacobi as sj


def beta_closed(n, a):
    if n == 0:
        return 0.0
    return n * (n + 2 * a) / ((2 * n - 1 + 2 * a) * (2 * n + 1 + 2 * a))


def test_table_shape_and_t0_beta():
    tab = sj.table(1.5, 0, 12)
    assert len(tab) == 13
    assert tab.n_max == 12
    assert tab.mantissa_bits >= 64
    beta = tab.column("beta")
    for n, b in enumerate(beta):
        assert b == pytest.approx(beta_closed(n, 1.5), rel=1e-14, abs=1e-300)


def test_column_text_keeps_digits():
    tab = sj.table("0.5", "1", 4)
    text = tab.column_text("h", 40)
    assert len(text) == 5
    assert float(text[2]) == pytest.approx(tab.column("h")[2], rel=1e-15)
    with pytest.raises(KeyError):
        tab.column("q")


def test_bad_alpha_raises():
    with pytest.raises(ValueError):
        sj.table(-1.5, 1, 4)


def test_identity_suite_passes():
    report = sj.verify("identities", [0.5, 1.5], [0.1, 1], n_max=8)
    assert {"re1", "re2", "re3", "re4", "S1", "id3"} <= set(report)
    for entry in report.values():
        assert float(entry["max_residual"]) <= 1e-22


def test_difference_suite_passes():
    report = sj.verify("difference", [0.5], [1], n_max=10)
    assert set(report) == {"btd", "pnd", "hnd"}
    assert max(float(e["max_residual"]) for e in report.values()) <= 1e-20


def test_log_dn0_small_cases():
    # D_1(0) = mu_0 = 2 at alpha = 0
    assert float(sj.log_dn0(0, 1)) == pytest.approx(math.log(2), rel=1e-15)


def test_series_slope_beta():
    res = sj.compare_series("beta", 0, 1, [32, 64, 128, 256])
    assert res["fit_valid"]
    assert res["slope"] == pytest.approx(-7, abs=0.35)


def test_series_coefficients_vanish_at_half():
    c = sj.series_coefficients("beta", 0.5, 1)
    assert c[0] == 0
    assert c[1] == pytest.approx(0.25)
    assert all(abs(x) < 1e-30 for x in c[2:])


def test_hankel_asymptotic_close_to_exact_at_t0():
    n = 200
    exact = float(sj.log_dn0(1, n))
    assert sj.log_dn_asymptotic(1, 0, n) == pytest.approx(exact, rel=1e-12)


def test_order_fit():
    pts = [(n, 3.0 * n ** -5) for n in (10, 20, 40, 80)]
    assert sj.order_fit(pts) == pytest.approx(-5, abs=1e-9)


def test_iterate_matches_table():
    it = sj.iterate_beta(0.5, 1, 10)
    tab = sj.table(0.5, 1, 10).column("beta")
    assert it == pytest.approx(tab[:11], rel=1e-15)
    with pytest.raises(ValueError):
        sj.iterate_beta(0.5, 0, 10)


def test_riccati_endpoint():
    sol = sj.riccati(0.5, 3, 0.1, 1, samples=5)
    assert len(sol["t"]) == 5
    R_end = sj.table(0.5, 1, 3).column("R")[3]
    assert sol["R"][-1] == pytest.approx(R_end, rel=1e-8)
