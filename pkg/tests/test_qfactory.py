import pytest

from qpd import qfactory as qf
from qpd.counters import oracle_pd, oracle_pdk, partitions
from qpd.series import constant, invert, reduce_mod


def test_pentagonal_terms():
    assert list(qf.pentagonal_terms(15)) == [(0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1), (15, -1)]


def test_f1_inverse_counts_partitions():
    p = invert(qf.euler_f1(40))
    assert list(p.coeffs) == [sum(1 for _ in partitions(n)) for n in range(41)]


def test_fk_scales():
    f3 = qf.fk(3, 12)
    assert f3.coeffs == (1, 0, 0, -1, 0, 0, -1, 0, 0, 0, 0, 0, 0)
    assert qf.fk(2, 10, 4).coeffs == tuple(c % 4 for c in qf.fk(2, 10).coeffs)


def test_eta_spec_validation():
    with pytest.raises(ValueError):
        qf.EtaQuotientSpec(())
    with pytest.raises(ValueError):
        qf.EtaQuotientSpec.of((0, 1))
    with pytest.raises(ValueError):
        qf.EtaQuotientSpec.of((2, 0))


def test_pd_start():
    assert qf.pd_series(10).coeffs == (1, 1, 3, 5, 10, 15, 28, 41, 69, 102, 160)


def test_pd_matches_oracle():
    assert list(qf.pd_series(40).coeffs) == [oracle_pd(n) for n in range(41)]


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6, 8, 9])
def test_pdk_two_routes(k):
    assert qf.pdk_series(k, 300) == qf.pdk_series_genfunct(k, 300)
    assert qf.pdk_series(k, 400, 4) == qf.pdk_series_genfunct(k, 400, 4)


@pytest.mark.parametrize("k", [2, 3, 5])
def test_pdk_matches_oracle(k):
    assert list(qf.pdk_series(k, 30).coeffs) == [oracle_pdk(k, n) for n in range(31)]


def test_pdk_small_values():
    assert qf.pdk_series(2, 10).coeffs == (1, 1, 2, 4, 5, 8, 12, 16, 22, 32, 42)
    assert qf.pdk_series(3, 6).coeffs == (1, 1, 3, 4, 9, 12, 21)


def test_pdk_rejects_small_k():
    with pytest.raises(ValueError):
        qf.pdk_series(1, 10)


def test_genfunct_spec_merges():
    spec = qf.pdk_genfunct_spec(2)
    assert dict(spec.factors) == {1: -1, 3: -1, 4: 1, 6: 2, 12: -1}


def test_prime_power_product():
    # pd_(p^l)(q) = prod_m pd_p(q^(p^m))
    from qpd.series import substitute_power

    N = 200
    prod = constant(1, N)
    for m in range(3):
        prod = prod * substitute_power(qf.pdk_series(2, N // 2**m), 2**m, N)
    assert prod == qf.pdk_series(8, N)


def test_g_times_pd():
    assert qf.g_series(100) * qf.pd_series(100) == constant(1, 100)


def test_h_values():
    assert qf.h_series(9).coeffs == (1, -2, 0, 0, 2, 0, 0, 0, 0, -2)
    assert qf.h_series(9, 3).coeffs == (1, 1, 0, 0, 2, 0, 0, 0, 0, 1)


def test_phi_psi():
    assert qf.theta(qf.PHI, 9).coeffs == (1, 2, 0, 0, 2, 0, 0, 0, 0, 2)
    assert qf.theta(qf.PSI, 10).coeffs == (1, 1, 0, 1, 0, 0, 1, 0, 0, 0, 1)


def test_general_theta_special_cases():
    # f(q, q) = phi(q), f(q, q^3) = psi(q), f(-q, -q) = phi(-q)
    N = 120
    assert qf.theta(qf.ThetaSpec.general(1, 1), N) == qf.theta(qf.PHI, N)
    assert qf.theta(qf.ThetaSpec.general(1, 3), N) == qf.theta(qf.PSI, N)
    assert qf.theta(qf.ThetaSpec.general(1, 1, -1, -1), N) == qf.h_series(N)


@pytest.mark.parametrize("x, y, s1, s2", [(3, 5, 1, 1), (1, 7, 1, 1), (6, 10, 1, 1), (1, 2, -1, -1), (2, 3, 1, -1), (1, 1, -1, -1)])
def test_theta_matches_triple_product(x, y, s1, s2):
    spec = qf.ThetaSpec.general(x, y, s1, s2)
    assert qf.theta(spec, 150) == qf.jacobi_product(x, y, s1, s2, 150)


def test_theta_3_5_start():
    assert qf.theta(qf.ThetaSpec.general(3, 5), 8).coeffs == (1, 0, 0, 1, 0, 1, 0, 0, 0)


def test_theta_spec_validation():
    with pytest.raises(ValueError):
        qf.ThetaSpec("chi")
    with pytest.raises(ValueError):
        qf.ThetaSpec.general(0, 1)
    with pytest.raises(ValueError):
        qf.ThetaSpec.general(1, 1, 2, 1)


def test_pochhammer():
    assert qf.pochhammer(1, 1, 5) == qf.fk(1, 5)
    assert qf.pochhammer(2, 3, 6).coeffs == (1, 0, -1, 0, 0, -1, 0)
    with pytest.raises(ValueError):
        qf.pochhammer(0, 1, 5)


def test_modular_lane_agrees():
    for m in (2, 3, 4):
        assert qf.pd_series(200, m) == reduce_mod(qf.pd_series(200), m)
        assert qf.pdk_series(4, 200, m) == reduce_mod(qf.pdk_series(4, 200), m)
