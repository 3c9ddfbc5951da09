import numpy as np
import pytest
from hypothesis import given
from scipy.integrate import quad
from hypothesis import strategies as st

from polarlist.codec import encode
from polarlist.construct import (
    crc_polar,
    design,
    ebch_polar,
    estimate_sc_fer,
    ga_reliabilities,
    lwb,
    lwb_preset,
    rm_polar,
    select_frozen,
)
from polarlist.construct import jfunc
from polarlist.construct.codespec import DYNAMIC, FROZEN, INFO, CodeSpec, assemble
from polarlist.construct.ga import _minus
from polarlist.construct.recommend import compare, verdict_from_metrics
from polarlist.construct.search import lwb_targets, search_lwb_constraints
from polarlist.crc import crc_bits_batch, koopman_to_poly
from polarlist.errors import InvalidArgument
from polarlist.f2kernel import kron_power, mat_mul_f2, polar_transform, rank_f2, row_weights
from polarlist.galois import ebch_parity_check
from polarlist.mcsim import noise_sigma
from polarlist.spectrum import probe


def boxplus(a, b):
    # ln((1 + e^(a+b)) / (e^a + e^b)), exact and free of tanh saturation
    return np.logaddexp(0.0, a + b) - np.logaddexp(a, b)


def genie_llrs(ch):
    """Decision LLRs of a genie-aided SC decoder for the all-zero word."""
    n = ch.shape[-1]
    if n == 1:
        return ch
    a, b = ch[..., : n // 2], ch[..., n // 2 :]
    return np.concatenate([genie_llrs(boxplus(a, b)), genie_llrs(a + b)], axis=-1)


def check_invariants(code: CodeSpec):
    kinds = code.kinds
    assert len(code.info_positions) + len(code.frozen_positions) + len(code.dynamic_positions) == code.n
    assert set(code.sources) == set(code.dynamic_positions.tolist())
    for t, src in code.sources.items():
        assert src and max(src) < t
        assert all(kinds[s] == INFO for s in src)
    cm = code.constraints()
    if len(cm):
        assert rank_f2(cm.to_matrix()) == len(cm)
    assert len(cm) == code.n - code.k


def all_families(rel, k):
    n = rel.n
    m = n.bit_length() - 1
    out = [select_frozen(rel, k), rm_polar(rel, k, 1), crc_polar(rel, k, koopman_to_poly(0x5))]
    for kp in sorted(d for d in __import__("polarlist.galois", fromlist=["x"]).ebch_dimensions(m) if d >= k):
        out.append(ebch_polar(rel, k, ebch_parity_check(m, kp)))
        break
    return out


# --- reliabilities -----------------------------------------------------------


def j_oracle(sigma):
    """J by adaptive quadrature of E[log2(1 + e^-L)], L ~ N(s^2/2, s^2)."""
    mu = sigma * sigma / 2
    dens = lambda x: np.exp(-((x - mu) ** 2) / (2 * sigma**2)) / np.sqrt(2 * np.pi * sigma**2)
    val, _ = quad(lambda x: dens(x) * np.logaddexp(0, -x) / np.log(2), mu - 40 * sigma, mu + 40 * sigma,
                  limit=400, epsabs=1e-14, epsrel=1e-12)
    return 1 - val


@pytest.mark.parametrize("sigma", [0.05, 0.3, 1.0, 2.0, 3.5, 6.0, 9.0])
def test_j_against_quadrature(sigma):
    assert jfunc.J(np.array([sigma]))[0] == pytest.approx(j_oracle(sigma), rel=1e-7, abs=1e-9)


def test_j_function_round_trip():
    s = np.logspace(-2, np.log10(8.0), 200)
    assert np.allclose(jfunc.J_inv(jfunc.J(s)), s, rtol=1e-6)
    assert np.all(np.diff(jfunc.J(s)) > 0)
    # beyond that J rounds to 1 in double precision; the log-domain pair still inverts
    big = np.linspace(8.0, 100.0, 50)
    assert np.allclose(jfunc.sigma_from_log_jc(jfunc.log_jc(big)), big, rtol=1e-6)


@given(st.floats(0.05, 60.0))
def test_polarization_ordering(sigma):
    i = jfunc.J(np.array([sigma]))[0]
    i_minus = jfunc.J(_minus(np.array([sigma])))[0]
    i_plus = jfunc.J(np.array([np.sqrt(2.0) * sigma]))[0]
    assert i_minus <= i <= i_plus
    # minus channel: 1 - J(sqrt2 J^-1(1 - I))
    assert i_minus == pytest.approx(1 - jfunc.J(np.sqrt(2) * jfunc.J_inv(np.array([1 - i])))[0], abs=1e-6)


def test_ga_two_channel_case():
    r = ga_reliabilities(2, 1.0, 0.5)
    ich = jfunc.J(np.array([np.sqrt(8 * 0.5 * 10 ** 0.1)]))[0]
    assert r.values[0] <= ich <= r.values[1]


def test_ga_monotone_in_snr():
    prev = None
    for snr in np.arange(-2.0, 8.01, 0.5):
        v = ga_reliabilities(128, snr, 0.5).values
        if prev is not None:
            assert np.all(v >= prev - 1e-12)
        prev = v


def test_ga_noiseless_limit_and_errors():
    r = ga_reliabilities(64, np.inf, 0.5)
    assert np.all(r.values == 1.0)
    assert estimate_sc_fer(select_frozen(r, 32), np.inf) == 0.0
    with pytest.raises(InvalidArgument):
        ga_reliabilities(100, 1.0, 0.5)
    with pytest.raises(InvalidArgument):
        ga_reliabilities(64, 1.0, 0.0)


def test_ga_worst_half_matches_genie_monte_carlo(rel128):
    rng = np.random.default_rng(11)
    sig = noise_sigma(4.0, 0.5)
    err = np.zeros(128)
    for _ in range(10):
        y = 1 + sig * rng.standard_normal((10_000, 128))
        d = genie_llrs(2 * y / sig**2)
        err += (d < 0).sum(0) + 0.5 * (d == 0).sum(0)
    worst_ga = set(rel128.order()[:64].tolist())
    worst_mc = set(np.argsort(-err, kind="stable")[:64].tolist())
    sample = rng.choice(128, 64, replace=False)
    agree = np.mean([(i in worst_ga) == (i in worst_mc) for i in sample])
    assert agree >= 0.95


# --- constructors --------------------------------------------------------------


def test_select_frozen_edges():
    r = design(16, 16, 2.0)
    assert len(select_frozen(r, 16).frozen_positions) == 0
    with pytest.raises(InvalidArgument):
        select_frozen(r, 0)
    with pytest.raises(InvalidArgument):
        select_frozen(r, 17)


def test_ties_freeze_lower_index():
    r = ga_reliabilities(8, np.inf, 0.5)  # every channel ties
    assert select_frozen(r, 3).info_positions.tolist() == [5, 6, 7]


def test_rm_polar_cases(rel128, polar128):
    assert rm_polar(rel128, 64, 8) == polar128
    rm16 = rm_polar(rel128, 64, 16)
    assert set(rm16.info_positions.tolist()) == set(np.flatnonzero(row_weights(128) >= 16).tolist())
    with pytest.raises(InvalidArgument, match="maximum feasible k is 29"):
        rm_polar(rel128, 64, 32)


@given(st.integers(1, 7), st.floats(-1.0, 6.0), st.data())
def test_rm_w1_is_polar(m, snr, data):
    n = 1 << m
    k = data.draw(st.integers(1, n))
    r = design(n, k, snr)
    assert rm_polar(r, k, 1) == select_frozen(r, k)


def test_crc_polar_structure(rel128):
    poly = koopman_to_poly(0x18)
    code = crc_polar(rel128, 64, poly)
    parent = select_frozen(rel128, 69)
    assert np.array_equal(np.sort(np.concatenate([code.info_positions, code.dynamic_positions])),
                          parent.info_positions)
    assert code.dynamic_positions.tolist() == parent.info_positions[-5:].tolist()
    rng = np.random.default_rng(0)
    msg = rng.integers(0, 2, (1000, 64), dtype=np.uint8)
    u = np.zeros((1000, 128), np.uint8)
    u[:, code.info_positions] = msg
    u[:, code.dynamic_positions] = crc_bits_batch(msg, poly)
    assert np.array_equal(encode(code, msg), polar_transform(u))


def test_crc_parity_polynomial(rel128):
    code = crc_polar(rel128, 64, koopman_to_poly(0x1))
    (t, src), = code.sources.items()
    assert src == tuple(code.info_positions.tolist())
    with pytest.raises(InvalidArgument):
        crc_polar(design(16, 15, 1.0), 15, koopman_to_poly(0x18))


@pytest.mark.parametrize("kp", [106, 99, 92, 85, 78])
def test_ebch_polar_in_null_space(rel128, kp):
    e = ebch_parity_check(7, kp)
    code = ebch_polar(rel128, 64, e)
    check_invariants(code)
    msg = np.random.default_rng(kp).integers(0, 2, (1000, 64), dtype=np.uint8)
    assert not mat_mul_f2(encode(code, msg), e.H.T).any()


def test_ebch_99_layout(ebch99):
    e = ebch_parity_check(7, 99)
    V = mat_mul_f2(kron_power(7), e.H.T).T
    assert rank_f2(V) == 29
    assert len(ebch99.frozen_positions) + len(ebch99.dynamic_positions) == 64
    assert (ebch99.dynamic_positions + 1).tolist() == [85, 89, 101, 105, 113]
    with pytest.raises(InvalidArgument):
        ebch_polar(design(128, 100, 4.0), 100, e)


def test_ebch_106_is_polar(rel128, polar128):
    assert ebch_polar(rel128, 64, ebch_parity_check(7, 106)) == polar128


def test_toy_rows_through_assemble():
    # rows u1, u2, u3+u4, u2+u5 over eight positions plus freezing u6
    code = assemble(8, [5], [[0], [1], [2, 3], [1, 4]], 0.0, "toy")
    assert code.kinds[[0, 1, 4, 5]].tolist() == [FROZEN] * 4
    assert code.kinds[3] == DYNAMIC and code.sources[3] == (2,)
    assert code.info_positions.tolist() == [2, 6, 7]
    with pytest.raises(InvalidArgument):
        assemble(8, [], [[0, 1], [1, 2], [0, 2]], 0.0, "toy")


def test_lwb_preset(lwb7, ebch99):
    one = {t + 1: {s + 1 for s in src} for t, src in lwb7.sources.items()}
    assert one == {
        85: {57, 83}, 99: {57, 83}, 113: {57, 83},
        89: {57}, 101: {57}, 98: {83}, 105: {83},
    }
    assert lwb7.k == 64
    assert np.array_equal(lwb7.info_positions, ebch99.info_positions)
    assert estimate_sc_fer(lwb7, 4.0) == estimate_sc_fer(ebch99, 4.0)


def test_lwb_errors_and_edge_cases(rel128, polar128):
    assert lwb(rel128, 64, 0) == polar128
    with pytest.raises(InvalidArgument):
        lwb(rel128, 64, 2, [[56, 82], [82, 56]])  # dependent rows
    with pytest.raises(InvalidArgument):
        lwb(rel128, 64, 1, [[0, 127]])  # outside the minimum-weight set
    with pytest.raises(InvalidArgument):
        lwb(rel128, 64, 60)


def test_lwb_targets_follow_preset(rel128):
    targets, free = lwb_targets(rel128, 64, 7)
    assert [t + 1 for t in targets] == [85, 89, 98, 99, 101, 105, 113]
    assert [f + 1 for f in free] == [57, 83]


def test_lwb_search_is_deterministic():
    rel = design(64, 32, 3.0)
    a = search_lwb_constraints(rel, 32, 2, budget=6, list_size=64, seed=5)
    b = search_lwb_constraints(rel, 32, 2, budget=6, list_size=64, seed=5)
    assert a == b
    code = lwb(rel, 32, 2, search_budget=6, search_list_size=64, seed=5)
    assert sorted(code.dynamic_positions.tolist()) == sorted(max(r) for r in a[0])
    check_invariants(code)


@pytest.mark.parametrize("n,k,snr", [(16, 8, 2.0), (32, 16, 2.0), (64, 32, 3.0), (128, 64, 4.0), (128, 96, 5.0)])
def test_invariants_all_constructors(n, k, snr):
    rel = design(n, k, snr)
    for code in all_families(rel, k):
        check_invariants(code)
    if n == 128 and k == 64:
        check_invariants(lwb_preset(rel))


# --- SC-FER estimate -----------------------------------------------------------


def test_sc_fer_table_values(polar128, rel128):
    assert estimate_sc_fer(polar128, 4.0) == pytest.approx(2.1507e-3, rel=0.10)
    assert estimate_sc_fer(rm_polar(rel128, 64, 16), 4.0) == pytest.approx(0.022155, rel=0.01)


def test_sc_fer_monotone(codes128):
    grid = np.arange(0.0, 7.01, 0.5)
    for code in codes128.values():
        p = [estimate_sc_fer(code, s) for s in grid]
        assert np.all(np.diff(p) <= 0)


# --- recommender ---------------------------------------------------------------


def test_verdict_rules():
    assert verdict_from_metrics(0.0067334, 0.0067334, 7.1666e-6, 1.0086e-5) == "A_dominates"
    assert verdict_from_metrics(0.0067334, 0.00854, 1.0086e-5, 5.3637e-6) == "crossover"
    assert verdict_from_metrics(0.01, 0.01, 1e-5, 1e-5) == "tie"
    assert verdict_from_metrics(0.02, 0.01, 1e-5, 1.01e-5) == "B_dominates"


def test_compare_codes(ebch99, ebch85):
    sa, sb = probe(ebch99, 1024), probe(ebch85, 1024)
    assert compare(ebch99, ebch85, 4.0, [sa, sb]).verdict == "crossover"
    assert compare(ebch99, ebch99, 4.0, [sa, sa]).verdict == "tie"
    with pytest.raises(InvalidArgument):
        compare(ebch99, select_frozen(design(128, 60, 4.0), 60), 4.0, [sa, sa])
