"""Seeded random search for LWB constraint sets."""
from __future__ import annotations

import numpy as np

from ..errors import InvalidArgument
from .ga import Reliabilities


def lwb_targets(rel: Reliabilities, k: int, n_df: int) -> tuple[list[int], list[int]]:
    """Split the minimum-weight info bits into (targets, free bits).

    Targets are the n_df largest indices, so every target has earlier free
    bits to depend on. For the (128, 64) code at 4 dB this picks the seven
    targets of the ``paper-128-64`` preset.
    """
    from .families import low_weight_bits

    _, i_min = low_weight_bits(rel, k, n_df)
    pool = sorted(int(i) for i in i_min)[1:]
    if len(pool) < n_df:
        raise InvalidArgument(f"n_df={n_df} exceeds the {len(pool)} usable minimum-weight bits")
    targets = pool[len(pool) - n_df :]
    free = sorted(set(i_min.tolist()) - set(targets))
    for t in targets:
        if not any(f < t for f in free):
            raise InvalidArgument(f"target {t} has no earlier free minimum-weight bit")
    return targets, free


def random_constraints(targets, free, rng: np.random.Generator) -> list[list[int]]:
    rows = []
    for t in targets:
        earlier = [f for f in free if f < t]
        while True:
            mask = rng.integers(0, 2, len(earlier)).astype(bool)
            if mask.any():
                break
        rows.append(sorted([f for f, b in zip(earlier, mask) if b]) + [t])
    return rows


def search_lwb_constraints(
    rel: Reliabilities,
    k: int,
    n_df: int,
    budget: int = 200,
    list_size: int = 1024,
    seed: int = 0,
) -> tuple[list[list[int]], float]:
    """Best of ``budget`` random constraint sets by probed P_UB at the design SNR.

    Ties keep the earliest candidate, so the result depends only on the seed.
    """
    from ..spectrum import probe, union_bound
    from .families import lwb

    if budget < 1:
        raise InvalidArgument("search budget must be >= 1")
    targets, free = lwb_targets(rel, k, n_df)
    rng = np.random.default_rng(seed)
    best_rows, best = None, np.inf
    seen = set()
    for _ in range(budget):
        rows = random_constraints(targets, free, rng)
        key = tuple(map(tuple, rows))
        if key in seen:
            continue
        seen.add(key)
        code = lwb(rel, k, n_df, rows)
        spec = probe(code, list_size, seed=seed)
        score = union_bound(spec, rel.design_snr_db, k / rel.n).p_ub if spec.entries else np.inf
        if score < best:
            best_rows, best = rows, score
    return best_rows, float(best)
