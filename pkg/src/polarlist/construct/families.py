"""Code constructors: polar, RM-polar, CRC-polar, eBCH-polar and LWB."""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from ..crc import CrcPoly, crc_generator, koopman_str
from ..errors import InvalidArgument
from ..f2kernel import kron_power, mat_mul_f2, row_weights, trailing_one_reduce
from ..galois import EbchCode
from .codespec import DYNAMIC, FROZEN, INFO, CodeSpec, assemble
from .ga import Reliabilities, ga_reliabilities

# The explicit N_df = 7 constraint set for the (128, 64) code at 4 dB,
# 1-based: u85 = u99 = u113 = u57 + u83, u89 = u101 = u57, u98 = u105 = u83.
LWB_128_64_PRESET: tuple[tuple[int, ...], ...] = (
    (57, 83, 85),
    (57, 83, 99),
    (57, 83, 113),
    (57, 89),
    (57, 101),
    (83, 98),
    (83, 105),
)

PRESETS = {"paper-128-64": (128, 64, LWB_128_64_PRESET)}


def design(n: int, k: int, design_snr_db: float) -> Reliabilities:
    """Reliabilities for an (n, k) code; the channel uses the payload rate k/n."""
    if not 1 <= k <= n:
        raise InvalidArgument(f"need 1 <= k <= n, got k={k}, n={n}")
    return ga_reliabilities(n, design_snr_db, k / n)


def _info_set(rel: Reliabilities, k: int) -> np.ndarray:
    if not 1 <= k <= rel.n:
        raise InvalidArgument(f"need 1 <= k <= n, got k={k}, n={rel.n}")
    return np.sort(rel.order()[rel.n - k :])


def _kinds_from_info(n: int, info: np.ndarray) -> np.ndarray:
    kinds = np.full(n, FROZEN, dtype=np.int8)
    kinds[info] = INFO
    return kinds


def select_frozen(rel: Reliabilities, k: int) -> CodeSpec:
    """Plain polar code: freeze the n - k least reliable positions."""
    info = _info_set(rel, k)
    return CodeSpec(
        n=rel.n,
        kinds=_kinds_from_info(rel.n, info),
        sources={},
        design_snr_db=rel.design_snr_db,
        family="polar",
    )


def rm_polar(rel: Reliabilities, k: int, w: int) -> CodeSpec:
    """RM-polar: rows lighter than ``w`` are frozen, then pick by reliability."""
    if not 1 <= k <= rel.n:
        raise InvalidArgument(f"need 1 <= k <= n, got k={k}, n={rel.n}")
    weights = row_weights(rel.n)
    allowed = weights >= w
    feasible = int(allowed.sum())
    if feasible < k:
        raise InvalidArgument(f"only {feasible} rows have weight >= {w}; maximum feasible k is {feasible}")
    order = [i for i in rel.order() if allowed[i]]
    info = np.sort(np.array(order[len(order) - k :], dtype=np.int64))
    return CodeSpec(
        n=rel.n,
        kinds=_kinds_from_info(rel.n, info),
        sources={},
        design_snr_db=rel.design_snr_db,
        family="rm",
        params={"w": int(w)},
    )


def crc_polar(rel: Reliabilities, k: int, poly: CrcPoly) -> CodeSpec:
    """CRC-polar code written with dynamically frozen check bits.

    The (n, k + ell) polar info set is built first; its ell largest indices
    hold the systematic CRC of the k message bits (message in ascending
    index order, highest-degree check bit first).
    """
    ell = poly.ell
    if k + ell > rel.n:
        raise InvalidArgument(f"k + ell = {k + ell} exceeds n = {rel.n}")
    parent = _info_set(rel, k + ell)
    msg_pos, chk_pos = parent[:k], parent[k:]
    G = crc_generator(k, poly)
    kinds = _kinds_from_info(rel.n, parent)
    kinds[chk_pos] = DYNAMIC
    sources = {
        int(p): tuple(int(q) for q in msg_pos[G[:, j] == 1]) for j, p in enumerate(chk_pos)
    }
    empty = [p for p, s in sources.items() if not s]
    for p in empty:  # a check bit that never depends on the message is a constant zero
        kinds[p] = FROZEN
        del sources[p]
    return CodeSpec(
        n=rel.n,
        kinds=kinds,
        sources=sources,
        design_snr_db=rel.design_snr_db,
        family="crc",
        params={"poly": koopman_str(poly), "ell": ell},
    )


def ebch_constraints(ebch: EbchCode):
    """u-domain constraint matrix V: trailing-one form of (F H^T)^T."""
    F = kron_power(ebch.n.bit_length() - 1)
    return trailing_one_reduce(mat_mul_f2(F, ebch.H.T).T)


def ebch_polar(rel: Reliabilities, k: int, ebch: EbchCode) -> CodeSpec:
    """Polar subcode of an extended BCH code.

    Pivots of V are frozen (dynamically when the row reaches unfrozen
    positions), then the k' - k least reliable non-pivot positions are
    frozen statically and substituted out of every source set.
    """
    if ebch.n != rel.n:
        raise InvalidArgument("eBCH length does not match reliabilities")
    if not 1 <= k <= ebch.k_prime:
        raise InvalidArgument(f"need 1 <= k <= k' = {ebch.k_prime}, got {k}")
    V = ebch_constraints(ebch)
    pivots = set(V.pivots)
    free = [int(i) for i in rel.order() if int(i) not in pivots]
    extra = free[: ebch.k_prime - k]
    code = assemble(
        rel.n,
        extra,
        [support for support, _ in V.rows],
        rel.design_snr_db,
        "ebch",
        {"kprime": ebch.k_prime},
    )
    assert code.k == k
    return code


def low_weight_bits(rel: Reliabilities, k: int, n_df: int) -> tuple[np.ndarray, np.ndarray]:
    """Parent (k + n_df) info set and its members of minimum row weight."""
    parent = _info_set(rel, k + n_df)
    weights = row_weights(rel.n)[parent]
    return parent, parent[weights == weights.min()]


def lwb(
    rel: Reliabilities,
    k: int,
    n_df: int,
    constraints: Sequence[Iterable[int]] | None = None,
    *,
    search_budget: int = 200,
    search_list_size: int = 1024,
    seed: int = 0,
) -> CodeSpec:
    """Low-weight-bits construction with ``n_df`` dynamically frozen bits.

    ``constraints`` are 0-based parity rows over the minimum-weight info bits
    of the (n, k + n_df) polar code; the largest index of each row becomes
    dynamically frozen. Without explicit rows a seeded random search picks
    the candidate set with the smallest probed union bound at the design SNR.
    """
    if n_df < 0 or k + n_df > rel.n:
        raise InvalidArgument(f"need 0 <= n_df and k + n_df <= n, got n_df={n_df}")
    if n_df == 0:
        code = select_frozen(rel, k)
        return CodeSpec(n=code.n, kinds=code.kinds, sources={}, design_snr_db=code.design_snr_db,
                        family="lwb", params={"ndf": 0})
    parent, i_min = low_weight_bits(rel, k, n_df)
    if n_df > len(i_min) - 1:
        raise InvalidArgument(
            f"n_df={n_df} needs at least {n_df + 1} minimum-weight info bits, found {len(i_min)}"
        )
    static = np.setdiff1d(np.arange(rel.n), parent)
    params = {"ndf": int(n_df)}
    if constraints is None:
        from .search import search_lwb_constraints

        constraints, score = search_lwb_constraints(
            rel, k, n_df, budget=search_budget, list_size=search_list_size, seed=seed
        )
        params.update({"search_seed": int(seed), "search_budget": int(search_budget)})
    rows = [sorted({int(x) for x in r}) for r in constraints]
    if len(rows) != n_df:
        raise InvalidArgument(f"expected {n_df} constraints, got {len(rows)}")
    members = set(i_min.tolist())
    for r in rows:
        if len(r) < 2:
            raise InvalidArgument(f"constraint {r} needs a target and at least one source")
        if not set(r) <= members:
            raise InvalidArgument(f"constraint {r} leaves the minimum-weight info set")
    code = assemble(rel.n, static, rows, rel.design_snr_db, "lwb", params)
    if code.k != k or len(code.dynamic_positions) != n_df:
        raise InvalidArgument("constraints collapse to static freezes; rows are degenerate")
    return code


def lwb_preset(rel: Reliabilities, name: str = "paper-128-64") -> CodeSpec:
    n, k, rows = PRESETS[name]
    if rel.n != n:
        raise InvalidArgument(f"preset {name} is defined for n={n}")
    code = lwb(rel, k, len(rows), [[i - 1 for i in r] for r in rows])
    code.params["preset"] = name
    return code


def estimate_sc_fer(
    code: CodeSpec,
    snr_db: float,
    count_dynamic: bool | None = None,
    rate: float | None = None,
) -> float:
    """GA estimate of the SC frame error rate, 1 - prod(1 - Q(sigma_i / 2)).

    The product runs over decision positions. Dynamically frozen positions
    are skipped since their value follows from earlier decisions, except for
    CRC-polar codes, whose check bits a CRC-aided SC decoder decides like
    information bits (``count_dynamic`` overrides the choice).
    """
    if count_dynamic is None:
        count_dynamic = code.family == "crc"
    rel = ga_reliabilities(code.n, snr_db, code.rate if rate is None else rate)
    p = rel.bit_error_probs()
    mask = code.kinds == INFO
    if count_dynamic:
        mask |= code.kinds == DYNAMIC
    return float(-np.expm1(np.sum(np.log1p(-p[mask]))))
