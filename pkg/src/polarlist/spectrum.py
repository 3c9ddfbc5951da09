"""List-decoding distance-spectrum probe and union bounds.

The probe sends the all-zero codeword through a quiet AWGN channel and
decodes with a very large list. The nonzero codewords left in the list are
low-weight codewords, and their weight histogram is a partial weight
enumerator. Doubling the list until the union bound stops moving gives the
estimate used to rank codes.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.special import erfc

from .codec import LLR_CLAMP, scl_decode
from .construct.codespec import CodeSpec
from .construct.families import crc_polar, design, estimate_sc_fer
from .crc import CrcPoly, crc_bits_batch, enumerate_polys, koopman_str
from .errors import InvalidArgument
from .mcsim import noise_sigma

FORMAT_VERSION = 1


@dataclass
class DistanceSpectrum:
    """Partial weight enumerator ``{w: A_w}`` over nonzero weights."""

    entries: dict[int, int]
    probe_list_size: int
    converged: bool = False
    probe_snr_db: float = 10.0
    seed: int = 0
    trials: int = 1
    exhaustive: bool = False  # the list held every codeword
    fully_captured_weight: int | None = None

    def __post_init__(self):
        self.entries = {int(w): int(a) for w, a in sorted(self.entries.items())}
        if any(w < 1 or a < 1 for w, a in self.entries.items()):
            raise InvalidArgument("weights and multiplicities must be positive")

    @property
    def d_min_observed(self) -> int | None:
        return next(iter(self.entries), None)

    @property
    def A_min(self) -> int | None:
        d = self.d_min_observed
        return None if d is None else self.entries[d]

    def __len__(self) -> int:
        return sum(self.entries.values())

    def complete_entries(self) -> dict[int, int]:
        """Entries at weights up to the fully captured weight."""
        if self.fully_captured_weight is None:
            return {}
        return {w: a for w, a in self.entries.items() if w <= self.fully_captured_weight}


@dataclass(frozen=True)
class BoundReport:
    snr_db: float
    rate: float
    p_ub: float
    p_aub_min: float
    A_min: int
    d_min: int


def _es_n0(snr_db: float, rate: float) -> float:
    if not 0.0 < rate <= 1.0:
        raise InvalidArgument(f"rate must lie in (0, 1], got {rate}")
    return rate * 10.0 ** (snr_db / 10.0)


def union_bound(spec: DistanceSpectrum | dict, snr_db: float, rate: float) -> BoundReport:
    """``P_UB = 1/2 sum_w A_w erfc(sqrt(w Es/N0))`` and its d_min term."""
    entries = spec.entries if isinstance(spec, DistanceSpectrum) else dict(spec)
    if not entries:
        raise InvalidArgument("union bound of an empty spectrum")
    s = _es_n0(snr_db, rate)
    w = np.array(sorted(entries), dtype=np.float64)
    a = np.array([entries[int(x)] for x in w], dtype=np.float64)
    terms = 0.5 * a * erfc(np.sqrt(w * s))
    d = int(w[0])
    return BoundReport(
        snr_db=float(snr_db),
        rate=float(rate),
        p_ub=float(min(terms.sum(), 1.0)),
        p_aub_min=float(min(terms[0], 1.0)),
        A_min=int(a[0]),
        d_min=d,
    )


def certified_weight(llr: np.ndarray, prune_floor: float) -> int:
    """Largest w such that every codeword of weight <= w is certainly listed.

    With exact LLRs the penalty metric of a complete path never exceeds its
    exact cost ``-ln P(c | y) = sum_j softplus(-(1 - 2 c_j) L_j)``, and over
    weight-w words that cost is at most ``sum_j softplus(-L_j)`` plus the w
    largest ``L_j``. A word whose metric sits below every pruned candidate
    cannot have been pruned.
    """
    if not np.isfinite(prune_floor):
        return len(llr)
    base = np.logaddexp(0.0, -llr).sum()
    bound = base + np.cumsum(np.sort(llr)[::-1])
    ok = bound < prune_floor * (1.0 - 1e-9) - 1e-9
    return int(np.count_nonzero(ok)) if ok[0] else 0


def harvest(
    code: CodeSpec,
    L: int,
    probe_snr_db: float = 10.0,
    seed: int = 0,
    crc_filter: CrcPoly | None = None,
    trial: int = 0,
) -> tuple[np.ndarray, bool, int]:
    """Nonzero codewords of one probe trial.

    Also returns whether the list held the entire code (nothing was ever
    pruned) and the certified capture weight.
    """
    if L < 2:
        raise InvalidArgument("probe list size must be >= 2")
    dec_code = code
    if crc_filter is not None:
        if code.family != "crc" or len(code.dynamic_positions) != crc_filter.ell:
            raise InvalidArgument("crc_filter needs a CRC-polar code built with that polynomial")
        dec_code = code.relaxed()
    rng = np.random.default_rng([int(seed), int(trial)])
    sigma = noise_sigma(probe_snr_db, code.rate)
    y = 1.0 + sigma * rng.standard_normal(code.n)
    llr = np.clip(2.0 * y / sigma**2, -LLR_CLAMP, LLR_CLAMP)
    dl = scl_decode(dec_code, llr, L)
    exhaustive = not np.isfinite(dl.prune_floor)
    certified = certified_weight(llr, dl.prune_floor)
    cw = dl.codewords
    if crc_filter is not None:
        msgs = dl.messages
        k = code.k
        keep = np.all(crc_bits_batch(msgs[:, :k], crc_filter) == msgs[:, k:], axis=1)
        cw = cw[keep]
    cw = cw[cw.any(axis=1)]
    return cw, exhaustive, certified


def _histogram(codewords: np.ndarray) -> dict[int, int]:
    w, a = np.unique(codewords.sum(axis=1, dtype=np.int64), return_counts=True)
    return {int(x): int(y) for x, y in zip(w, a)}


def probe(
    code: CodeSpec,
    L: int,
    probe_snr_db: float = 10.0,
    seed: int = 0,
    crc_filter: CrcPoly | None = None,
    trials: int = 1,
) -> DistanceSpectrum:
    """Weight histogram of the nonzero codewords found by an L-list probe.

    With ``trials > 1`` several seeded noise draws are decoded and the
    distinct codewords are pooled.
    """
    if trials < 1:
        raise InvalidArgument("trials must be >= 1")
    pools = []
    exhaustive = False
    certified = 0
    for t in range(trials):
        cw, ex, cert = harvest(code, L, probe_snr_db, seed, crc_filter, trial=t)
        pools.append(cw)
        exhaustive |= ex
        certified = max(certified, cert)  # each trial's certificate holds on its own
    cw = np.unique(np.concatenate(pools), axis=0) if trials > 1 else pools[0]
    return DistanceSpectrum(
        entries=_histogram(cw),
        probe_list_size=int(L),
        probe_snr_db=float(probe_snr_db),
        seed=int(seed),
        trials=int(trials),
        exhaustive=bool(exhaustive),
        converged=bool(exhaustive),
        fully_captured_weight=code.n if exhaustive else certified,
    )


def _is_pow2(x: int) -> bool:
    return x >= 1 and x & (x - 1) == 0


def converge(
    code: CodeSpec,
    L_start: int = 32,
    L_max: int = 1 << 14,
    snr_db: float = 4.0,
    tol: float = 0.01,
    crc_filter: CrcPoly | None = None,
    probe_snr_db: float = 10.0,
    seed: int = 0,
    trials: int = 1,
) -> tuple[DistanceSpectrum, list[tuple[int, float]]]:
    """Double the probe list until P_UB moves by less than ``tol`` twice in a row.

    Returns the spectrum at the last list size and the ``(L, P_UB)`` history.
    Stopping at ``L_max`` without settling leaves ``converged = False``.
    """
    if not (_is_pow2(L_start) and _is_pow2(L_max)) or L_start > L_max:
        raise InvalidArgument("need powers of two with L_start <= L_max")
    L_start = max(L_start, 2)
    history: list[tuple[int, float]] = []
    calm = 0
    L = L_start
    while True:
        spec = probe(code, L, probe_snr_db, seed, crc_filter, trials)
        p = union_bound(spec, snr_db, code.rate).p_ub if spec.entries else 0.0
        if history:
            prev = history[-1][1]
            change = abs(p - prev) / prev if prev > 0 else (0.0 if p == 0 else np.inf)
            calm = calm + 1 if change < tol else 0
        history.append((L, p))
        if spec.exhaustive or calm >= 2:
            spec.converged = True
            return spec, history
        if L >= L_max:
            spec.converged = False
            return spec, history
        L *= 2


@dataclass
class CrcSearchRow:
    poly: str
    ell: int
    aub: float
    sc_fer: float
    d_min: int
    A_min: int
    converged: bool


def crc_search(
    n: int,
    k: int,
    ell_range: Iterable[int],
    design_snr_db: float = 4.0,
    L_max: int = 1 << 14,
    snr_db: float = 4.0,
    L_start: int = 32,
    seed: int = 0,
    probe_snr_db: float = 10.0,
) -> list[CrcSearchRow]:
    """Exhaustive search over CRC polynomials ranked by converged P_UB."""
    rel = design(n, k, design_snr_db)
    rows = []
    for ell in ell_range:
        for poly in enumerate_polys(int(ell)):
            code = crc_polar(rel, k, poly)
            spec, hist = converge(code, L_start, L_max, snr_db, seed=seed, probe_snr_db=probe_snr_db)
            rep = union_bound(spec, snr_db, code.rate) if spec.entries else None
            rows.append(
                CrcSearchRow(
                    poly=koopman_str(poly),
                    ell=poly.ell,
                    aub=hist[-1][1],
                    sc_fer=estimate_sc_fer(code, snr_db),
                    d_min=rep.d_min if rep else 0,
                    A_min=rep.A_min if rep else 0,
                    converged=spec.converged,
                )
            )
    rows.sort(key=lambda r: (r.aub, r.ell, int(r.poly, 16)))
    return rows


# ---------------------------------------------------------------------------
# files


def write_spectrum(prefix, spec: DistanceSpectrum, snr_db: float, rate: float) -> tuple[str, str]:
    """Write ``PREFIX.csv`` and the ``PREFIX.json`` sidecar; returns both paths."""
    prefix = str(prefix)
    csv_path, json_path = prefix + ".csv", prefix + ".json"
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["weight", "multiplicity"])
        for wt, a in spec.entries.items():
            w.writerow([wt, a])
    rep = union_bound(spec, snr_db, rate) if spec.entries else None
    meta = {
        "version": FORMAT_VERSION,
        "L": spec.probe_list_size,
        "probe_snr_db": spec.probe_snr_db,
        "seed": spec.seed,
        "trials": spec.trials,
        "converged": spec.converged,
        "snr_db": float(snr_db),
        "p_ub": rep.p_ub if rep else 0.0,
        "p_aub_min": rep.p_aub_min if rep else 0.0,
        "fully_captured_weight": spec.fully_captured_weight,
    }
    with open(json_path, "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return csv_path, json_path


def read_spectrum(prefix) -> DistanceSpectrum:
    prefix = str(prefix)
    with open(prefix + ".csv", newline="") as fh:
        entries = {int(r["weight"]): int(r["multiplicity"]) for r in csv.DictReader(fh)}
    with open(prefix + ".json") as fh:
        meta = json.load(fh)
    return DistanceSpectrum(
        entries=entries,
        probe_list_size=meta["L"],
        converged=meta["converged"],
        probe_snr_db=meta["probe_snr_db"],
        seed=meta["seed"],
        trials=meta.get("trials", 1),
        fully_captured_weight=meta.get("fully_captured_weight"),
    )


def write_crc_table(path, rows: Sequence[CrcSearchRow]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["rank", "poly", "ell", "aub", "sc_fer", "d_min", "A_min", "converged"])
        for i, r in enumerate(rows, 1):
            w.writerow([i, r.poly, r.ell, f"{r.aub:.5e}", f"{r.sc_fer:.5e}", r.d_min, r.A_min, int(r.converged)])
