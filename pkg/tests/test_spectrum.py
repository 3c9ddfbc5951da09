import json

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polarlist.codec import set_memory_cap
from polarlist.construct import crc_polar, design, select_frozen
from polarlist.construct.codespec import CodeSpec, assemble
from polarlist.crc import koopman_to_poly
from polarlist.errors import InvalidArgument
from polarlist.f2kernel import mat_mul_f2, polar_transform
from polarlist.spectrum import (
    DistanceSpectrum,
    certified_weight,
    converge,
    crc_search,
    harvest,
    probe,
    read_spectrum,
    union_bound,
    write_spectrum,
)

from oracles import weight_enumerator


def toy2():
    return CodeSpec(n=2, kinds=np.array([1, 0]), sources={}, design_snr_db=0.0)


def random_small_code(seed, n, k_parent, n_dyn):
    rng = np.random.default_rng(seed)
    parent = select_frozen(design(n, k_parent, 2.0), k_parent)
    info = parent.info_positions
    rows = []
    for t in rng.choice(np.arange(1, len(info)), n_dyn, replace=False):
        src = [int(s) for s in info[:t] if rng.random() < 0.5] or [int(info[0])]
        rows.append(src + [int(info[t])])
    return assemble(n, parent.frozen_positions, rows, 2.0, "lwb", strict=False)


def test_two_codeword_toy():
    for L in (2, 8, 64):
        assert probe(toy2(), L).entries == {2: 1}
    spec, hist = converge(toy2(), 2, 64)
    assert spec.converged and spec.exhaustive and len(hist) == 1


def test_probe_16_8_exact():
    code = select_frozen(design(16, 8, 2.0), 8)
    spec = probe(code, 256)
    assert spec.exhaustive and spec.entries == weight_enumerator(code)


@settings(max_examples=25)
@given(st.integers(0, 10**6), st.integers(6, 10), st.integers(0, 3), st.sampled_from([4, 16, 64]))
def test_probe_never_overcounts_and_certified_weights_are_exact(seed, k_parent, n_dyn, L):
    code = random_small_code(seed, 16, k_parent, n_dyn)
    truth = weight_enumerator(code)
    spec = probe(code, L, seed=seed)
    assert all(a <= truth.get(w, 0) for w, a in spec.entries.items())
    fc = spec.fully_captured_weight
    assert fc is not None
    for w in range(1, fc + 1):
        assert spec.entries.get(w, 0) == truth.get(w, 0)


def test_harvested_words_are_codewords(codes128):
    for code in codes128.values():
        cw, _, _ = harvest(code, 256)
        u = polar_transform(cw)  # the transform is its own inverse
        assert not mat_mul_f2(u, code.constraints().to_matrix().T).any()
        assert cw.any(axis=1).all()


def test_certificate_edges():
    llr = np.array([5.0, 6.0, 7.0, 8.0])
    assert certified_weight(llr, np.inf) == 4
    assert certified_weight(llr, 0.0) == 0
    base = np.logaddexp(0, -llr).sum()
    assert certified_weight(llr, base + 8.0 + 7.0 + 0.5) == 2


def test_probe_rejects_small_list(polar128):
    with pytest.raises(InvalidArgument):
        probe(polar128, 1)
    with pytest.raises(InvalidArgument):
        converge(polar128, 48, 1024)


def test_history_monotone(polar128):
    _, hist = converge(polar128, 32, 4096)
    p = [v for _, v in hist]
    assert all(b >= a * (1 - 1e-12) for a, b in zip(p, p[1:]))


# --- bounds --------------------------------------------------------------------


def oracle_ub(entries, snr_db, rate):
    mpmath.mp.dps = 40
    s = mpmath.mpf(rate) * mpmath.power(10, mpmath.mpf(snr_db) / 10)
    return sum(mpmath.mpf(a) / 2 * mpmath.erfc(mpmath.sqrt(w * s)) for w, a in entries.items())


@pytest.mark.parametrize("snr", np.linspace(-1.0, 9.0, 100))
def test_union_bound_against_high_precision(snr):
    entries = {8: 304, 12: 1000, 16: 45592}
    rep = union_bound(entries, float(snr), 0.5)
    exact = oracle_ub(entries, float(snr), 0.5)
    if exact < 1:
        assert abs(rep.p_ub - float(exact)) <= 1e-10 * float(exact)
    else:
        assert rep.p_ub == 1.0


def test_union_bound_single_term_and_order():
    rep = union_bound({5: 1}, 3.0, 0.25)
    assert rep.p_ub == pytest.approx(float(oracle_ub({5: 1}, 3.0, 0.25)), rel=1e-12)
    rep = union_bound({8: 300, 10: 2000}, 4.0, 0.5)
    assert rep.p_aub_min <= rep.p_ub and rep.d_min == 8 and rep.A_min == 300
    with pytest.raises(InvalidArgument):
        union_bound({}, 4.0, 0.5)


@given(st.dictionaries(st.integers(1, 128), st.integers(1, 10**6), min_size=1, max_size=8),
       st.floats(0.0, 8.0), st.floats(0.05, 2.0), st.floats(0.05, 1.0))
def test_union_bound_decreasing_in_snr(entries, snr, step, rate):
    a = union_bound(entries, snr, rate).p_ub
    b = union_bound(entries, snr + step, rate).p_ub
    assert b < a or a == b == 1.0 or b == 0.0


def test_low_weight_crc_beats_high_distance_ebch():
    crc72 = union_bound({12: 117}, 4.0, 0.5).p_ub
    ebch85 = union_bound({16: 45592}, 4.0, 0.5).p_ub
    assert crc72 < ebch85


# --- files and search ----------------------------------------------------------


def test_spectrum_file_round_trip(tmp_path, polar128):
    spec = probe(polar128, 64, seed=3)
    csv_path, json_path = write_spectrum(tmp_path / "s", spec, 4.0, 0.5)
    assert open(csv_path).readline().strip() == "weight,multiplicity"
    meta = json.load(open(json_path))
    assert meta["version"] == 1
    assert {"L", "probe_snr_db", "seed", "converged", "snr_db", "p_ub", "p_aub_min"} <= set(meta)
    back = read_spectrum(tmp_path / "s")
    assert back.entries == spec.entries and back.probe_list_size == 64 and back.seed == 3


def test_spectrum_validation():
    with pytest.raises(InvalidArgument):
        DistanceSpectrum({0: 1}, 4)
    with pytest.raises(InvalidArgument):
        DistanceSpectrum({3: 0}, 4)


def test_crc_search_single_candidate():
    rows = crc_search(32, 16, [1], design_snr_db=2.0, L_max=256)
    assert len(rows) == 1 and rows[0].poly == "0x1"


def test_crc_search_ell3(rel128):
    rows = crc_search(128, 64, [3], L_max=1 << 12)
    assert len(rows) == 4
    assert rows[0].poly == "0x5"
    assert [r.aub for r in rows] == sorted(r.aub for r in rows)


def test_ell3_table_value_with_u40_parent():
    # the published l=3 value belongs to the parent info set holding u40 rather than u98;
    # designing the (128, 67) parent at its own rate makes that swap
    code = crc_polar(design(128, 67, 4.0), 64, koopman_to_poly(0x5))
    assert 39 in code.info_positions and 97 not in np.concatenate([code.info_positions, code.dynamic_positions])
    _, hist = converge(code)
    assert hist[-1][1] == pytest.approx(1.9433e-4, rel=0.10)


@pytest.mark.slow
def test_ebch85_weight16_multiplicity(ebch85):
    old = set_memory_cap(1 << 25)
    try:
        spec = probe(ebch85, 1 << 17, trials=3)
    finally:
        set_memory_cap(old)
    assert spec.d_min_observed == 16
    assert spec.A_min == 45592
