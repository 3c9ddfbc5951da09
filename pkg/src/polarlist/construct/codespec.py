"""CodeSpec: the frozen / dynamically frozen / information layout of a code."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from ..errors import InvalidArgument
from ..f2kernel import ConstraintMatrix, log2_exact, rank_f2, trailing_one_reduce

INFO, FROZEN, DYNAMIC = 0, 1, 2
KIND_NAMES = {INFO: "info", FROZEN: "frozen", DYNAMIC: "dynamic"}


@dataclass(frozen=True, eq=False)
class CodeSpec:
    """An (n, k) polar-family code over u-domain positions 0..n-1.

    ``sources`` maps each dynamically frozen position to the information
    positions whose XOR it equals. Constructors keep this canonical form:
    sources are information positions only and all precede their target.
    """

    n: int
    kinds: np.ndarray
    sources: Mapping[int, tuple[int, ...]]
    design_snr_db: float
    family: str = "polar"
    params: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        kinds = np.asarray(self.kinds, dtype=np.int8).copy()
        kinds.setflags(write=False)
        object.__setattr__(self, "kinds", kinds)
        srcs = {int(t): tuple(sorted(int(s) for s in v)) for t, v in self.sources.items()}
        object.__setattr__(self, "sources", dict(sorted(srcs.items())))
        object.__setattr__(self, "params", dict(self.params))
        self.validate()

    # --- views -----------------------------------------------------------
    @property
    def m(self) -> int:
        return self.n.bit_length() - 1

    @property
    def k(self) -> int:
        return int(np.count_nonzero(self.kinds == INFO))

    @property
    def rate(self) -> float:
        return self.k / self.n

    @property
    def info_positions(self) -> np.ndarray:
        return np.flatnonzero(self.kinds == INFO)

    @property
    def frozen_positions(self) -> np.ndarray:
        return np.flatnonzero(self.kinds == FROZEN)

    @property
    def dynamic_positions(self) -> np.ndarray:
        return np.flatnonzero(self.kinds == DYNAMIC)

    def constraints(self) -> ConstraintMatrix:
        """All static and dynamic constraints as a trailing-one matrix."""
        rows = []
        for p in range(self.n):
            if self.kinds[p] == FROZEN:
                rows.append(((p,), p))
            elif self.kinds[p] == DYNAMIC:
                rows.append((tuple(sorted(self.sources[p] + (p,))), p))
        return ConstraintMatrix(n_cols=self.n, rows=tuple(rows))

    def source_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR layout (ptr, idx) of dynamic sources, indexed by position."""
        ptr = np.zeros(self.n + 1, dtype=np.int64)
        idx = []
        for p in range(self.n):
            s = self.sources.get(p, ())
            idx.extend(s)
            ptr[p + 1] = ptr[p] + len(s)
        return ptr, np.array(idx, dtype=np.int64)

    def relaxed(self) -> "CodeSpec":
        """The parent code with every dynamic position turned into information."""
        kinds = np.where(self.kinds == DYNAMIC, INFO, self.kinds)
        return CodeSpec(
            n=self.n,
            kinds=kinds,
            sources={},
            design_snr_db=self.design_snr_db,
            family="polar",
            params={"relaxed_from": self.family},
        )

    def validate(self) -> None:
        log2_exact(self.n)
        kinds = self.kinds
        if kinds.shape != (self.n,):
            raise InvalidArgument("kinds must have length n")
        if not np.isin(kinds, (INFO, FROZEN, DYNAMIC)).all():
            raise InvalidArgument("unknown position kind")
        if self.k < 1:
            raise InvalidArgument("code dimension must be at least 1")
        dyn = set(np.flatnonzero(kinds == DYNAMIC).tolist())
        if dyn != set(self.sources):
            raise InvalidArgument("sources must be given for exactly the dynamic positions")
        for t, srcs in self.sources.items():
            if not srcs:
                raise InvalidArgument(f"dynamic position {t} has no sources")
            if max(srcs) >= t:
                raise InvalidArgument(f"dynamic position {t} has a source at or after it")
            if any(kinds[s] != INFO for s in srcs):
                raise InvalidArgument(f"dynamic position {t} references a non-information source")

    def __eq__(self, other) -> bool:
        if not isinstance(other, CodeSpec):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.kinds, other.kinds)
            and self.sources == other.sources
        )

    def same_layout(self, other: "CodeSpec") -> bool:
        return self == other

    def __repr__(self) -> str:
        return (
            f"CodeSpec(n={self.n}, k={self.k}, family={self.family!r}, "
            f"frozen={len(self.frozen_positions)}, dynamic={len(self.dynamic_positions)})"
        )


def assemble(
    n: int,
    static: Iterable[int],
    constraint_rows: Iterable[Iterable[int]],
    design_snr_db: float,
    family: str,
    params: Mapping[str, object] | None = None,
    strict: bool = True,
) -> CodeSpec:
    """Build a canonical CodeSpec from static-zero positions and parity rows.

    Each row lists positions whose u-values XOR to zero. Static freezes join
    as singleton rows, the whole set is brought to trailing-one form, and
    every pivot is then rewritten in terms of information positions only
    (static positions substituted by zero, earlier dynamic ones by their
    sources). A pivot whose row collapses to itself is frozen statically.
    With ``strict`` a rank-deficient input raises InvalidArgument.
    """
    static = sorted({int(s) for s in static})
    rows = [sorted({int(x) for x in r}) for r in constraint_rows]
    rows = [r for r in rows if r]
    mat = np.zeros((len(static) + len(rows), n), dtype=np.uint8)
    for i, s in enumerate(static):
        mat[i, s] = 1
    for i, r in enumerate(rows):
        mat[len(static) + i, r] = 1
    kinds = np.full(n, INFO, dtype=np.int8)
    sources: dict[int, tuple[int, ...]] = {}
    if mat.shape[0]:
        reduced = trailing_one_reduce(mat)
        if strict and len(reduced) != mat.shape[0]:
            raise InvalidArgument(
                f"constraints are linearly dependent (rank {len(reduced)} of {mat.shape[0]})"
            )
        for support, p in reduced.rows:
            acc: set[int] = set()
            for s in support[:-1]:
                if kinds[s] == FROZEN:
                    continue
                acc ^= set(sources[s]) if kinds[s] == DYNAMIC else {s}
            if acc:
                kinds[p] = DYNAMIC
                sources[p] = tuple(sorted(acc))
            else:
                kinds[p] = FROZEN
    return CodeSpec(
        n=n,
        kinds=kinds,
        sources=sources,
        design_snr_db=design_snr_db,
        family=family,
        params=params or {},
    )


def rows_independent(rows: Iterable[Iterable[int]], n: int) -> bool:
    rows = [list(r) for r in rows]
    if not rows:
        return True
    mat = np.zeros((len(rows), n), dtype=np.uint8)
    for i, r in enumerate(rows):
        mat[i, r] = 1
    return rank_f2(mat) == len(rows)
