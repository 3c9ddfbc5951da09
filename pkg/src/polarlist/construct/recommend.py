"""Comparing two codes by SC-FER estimate and union bound."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..errors import InvalidArgument
from .codespec import CodeSpec
from .families import estimate_sc_fer

VERDICTS = ("A_dominates", "B_dominates", "crossover", "tie")
REL_TOL = 0.02

GUIDANCE = (
    "SC-FER governs small lists and the union bound governs large ones. "
    "A code better on both is expected to win at every list size. With a "
    "crossover the better-SC code wins below some list size L' and the "
    "lower-bound code above it. For higher code dimension the SC estimate "
    "tends to matter more, so prefer the more polar-like code unless the "
    "list is large; this is a heuristic, not a guarantee."
)


@dataclass(frozen=True)
class CompareVerdict:
    sc_fer_a: float
    sc_fer_b: float
    aub_a: float
    aub_b: float
    verdict: str
    snr_db: float

    def report(self, name_a: str = "A", name_b: str = "B") -> str:
        lines = [
            f"snr_db       {self.snr_db:g}",
            f"sc_fer  {name_a}: {self.sc_fer_a:.5e}  {name_b}: {self.sc_fer_b:.5e}",
            f"aub     {name_a}: {self.aub_a:.5e}  {name_b}: {self.aub_b:.5e}",
            f"verdict      {self.verdict}",
            "",
            GUIDANCE,
        ]
        return "\n".join(lines)


def _sign(a: float, b: float, eps: float) -> int:
    """+1 if a is lower than b beyond relative tolerance, -1 if higher, else 0."""
    scale = max(abs(a), abs(b))
    if scale == 0.0 or abs(a - b) <= eps * scale:
        return 0
    return 1 if a < b else -1


def verdict_from_metrics(sc_a, sc_b, aub_a, aub_b, eps: float = REL_TOL) -> str:
    s1, s2 = _sign(sc_a, sc_b, eps), _sign(aub_a, aub_b, eps)
    if s1 >= 0 and s2 >= 0 and (s1 or s2):
        return "A_dominates"
    if s1 <= 0 and s2 <= 0 and (s1 or s2):
        return "B_dominates"
    if s1 * s2 < 0:
        return "crossover"
    return "tie"


def compare(a: CodeSpec, b: CodeSpec, snr_db: float, spectra: Sequence, eps: float = REL_TOL) -> CompareVerdict:
    """Verdict from SC-FER estimates and the union bounds of two spectra."""
    from ..spectrum import union_bound

    if (a.n, a.k) != (b.n, b.k):
        raise InvalidArgument(f"codes differ in (n, k): {(a.n, a.k)} vs {(b.n, b.k)}")
    spec_a, spec_b = spectra
    sc_a, sc_b = estimate_sc_fer(a, snr_db), estimate_sc_fer(b, snr_db)
    aub_a = union_bound(spec_a, snr_db, a.rate).p_ub
    aub_b = union_bound(spec_b, snr_db, b.rate).p_ub
    return CompareVerdict(sc_a, sc_b, aub_a, aub_b, verdict_from_metrics(sc_a, sc_b, aub_a, aub_b, eps), float(snr_db))


def bracket_crossover(
    a: CodeSpec,
    b: CodeSpec,
    snr_db: float,
    list_sizes: Sequence[int] = (1, 2, 4, 8, 16, 32),
    min_errors: int = 100,
    max_frames: int = 10**6,
    seed: int = 0,
    threads: int = 1,
):
    """Simulate both codes over growing lists and bracket where the winner flips.

    Returns ``(rows, bracket)``: rows of ``(L, fer_a, fer_b)`` and the pair of
    consecutive list sizes across which the better code changes, or None.
    """
    from ..mcsim import SweepConfig, measure_fer

    rows = []
    for L in list_sizes:
        kind = "sc" if L == 1 else "scl"
        cfg = SweepConfig([snr_db], L=L, min_errors=min_errors, max_frames=max_frames, seed=seed, decoder=kind)
        fa = measure_fer(a, cfg, threads)[0].fer
        fb = measure_fer(b, cfg, threads)[0].fer
        rows.append((int(L), fa, fb))
    bracket = None
    for (l0, a0, b0), (l1, a1, b1) in zip(rows, rows[1:]):
        if (a0 < b0) != (a1 < b1):
            bracket = (l0, l1)
            break
    return rows, bracket
