"""GF(2^m) arithmetic and extended primitive BCH parity-check matrices.

Code coordinates are labelled by field elements. Coordinate ``t`` (0-based,
``0 <= t < 2^m``) carries the element ``x_t = sum_b a_b alpha^b`` whose
coefficient ``a_b`` is bit ``m-1-b`` of ``t`` XOR 1. Reading the polynomial
basis MSB-first lines the eBCH code up with the Kronecker structure of the
polar transform; the complement is a translation (an automorphism of every
extended BCH code) that parks the extension coordinate ``x = 0`` at the last
index, ``n - 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidArgument
from .f2kernel import rank_f2

# Primitive polynomials, bit i = coefficient of x^i.
DEFAULT_PRIMITIVE_POLYS = {
    3: 0b1011,  # x^3 + x + 1
    4: 0b10011,  # x^4 + x + 1
    5: 0b100101,  # x^5 + x^2 + 1
    6: 0b1000011,  # x^6 + x + 1
    7: 0b10001001,  # x^7 + x^3 + 1
    8: 0b100011101,  # x^8 + x^4 + x^3 + x^2 + 1
    9: 0b1000010001,  # x^9 + x^4 + 1
    10: 0b10000001001,  # x^10 + x^3 + 1
    11: 0b100000000101,  # x^11 + x^2 + 1
    12: 0b1000001010011,  # x^12 + x^6 + x^4 + x + 1
    13: 0b10000000011011,  # x^13 + x^4 + x^3 + x + 1
}


@dataclass(frozen=True, eq=False)
class FieldGF2m:
    """GF(2^m) with log/antilog tables; elements are ints in the polynomial basis."""

    m: int
    poly: int
    exp: np.ndarray  # exp[i] = alpha^i, length 2*(2^m - 1)
    log: np.ndarray  # log[x] for x != 0; log[0] = -1

    @property
    def order(self) -> int:
        return (1 << self.m) - 1

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[self.log[a] + self.log[b]])

    def power(self, x: int, j: int) -> int:
        if x == 0:
            return 1 if j == 0 else 0
        return int(self.exp[(int(self.log[x]) * j) % self.order])

    def alpha_power(self, j: int) -> int:
        return int(self.exp[j % self.order])


def _poly_from_arg(m: int, primitive_poly) -> int:
    if primitive_poly is None:
        return DEFAULT_PRIMITIVE_POLYS[m]
    if isinstance(primitive_poly, (int, np.integer)):
        return int(primitive_poly)
    # coefficient list, highest degree first
    value = 0
    for c in primitive_poly:
        if c not in (0, 1):
            raise InvalidArgument("polynomial coefficients must be 0/1")
        value = (value << 1) | int(c)
    return value


def build_field(m: int, primitive_poly=None) -> FieldGF2m:
    """Build GF(2^m).

    ``primitive_poly`` is an int bit mask or a coefficient list (highest
    degree first); the default comes from ``DEFAULT_PRIMITIVE_POLYS``.
    """
    if not 3 <= m <= 13:
        raise InvalidArgument(f"extension degree must be in 3..13, got {m}")
    poly = _poly_from_arg(m, primitive_poly)
    if poly.bit_length() - 1 != m or not poly & 1:
        raise InvalidArgument(f"polynomial {poly:#x} is not of degree {m} with constant term")
    q = 1 << m
    order = q - 1
    exp = np.zeros(2 * order, dtype=np.int64)
    log = np.full(q, -1, dtype=np.int64)
    x = 1
    for i in range(order):
        if log[x] != -1:
            raise InvalidArgument(f"polynomial {poly:#x} is not primitive")
        exp[i] = x
        log[x] = i
        x <<= 1
        if x & q:
            x ^= poly
    if x != 1:
        raise InvalidArgument(f"polynomial {poly:#x} is not primitive")
    exp[order:] = exp[:order]
    exp.setflags(write=False)
    log.setflags(write=False)
    return FieldGF2m(m=m, poly=poly, exp=exp, log=log)


def cyclotomic_cosets(m: int) -> list[tuple[int, ...]]:
    """Cyclotomic cosets of 2 modulo 2^m - 1, ordered by smallest member."""
    if m < 1:
        raise InvalidArgument("m must be positive")
    order = (1 << m) - 1
    seen = set()
    cosets = []
    for i in range(order):
        if i in seen:
            continue
        c = []
        j = i
        while j not in c:
            c.append(j)
            j = (2 * j) % order
        seen.update(c)
        cosets.append(tuple(c))
    return cosets


def coordinate_elements(field: FieldGF2m) -> np.ndarray:
    """Field element carried by each code coordinate (see module docstring)."""
    m = field.m
    n = 1 << m
    out = np.zeros(n, dtype=np.int64)
    for t in range(n):
        c = t ^ (n - 1)
        x = 0
        for b in range(m):
            if (c >> (m - 1 - b)) & 1:
                x |= 1 << b
        out[t] = x
    return out


def _root_union(m: int, delta: int) -> set[int]:
    roots: set[int] = set()
    for coset in cyclotomic_cosets(m):
        if any(1 <= j <= delta - 1 for j in coset):
            roots.update(coset)
    return roots


@lru_cache(maxsize=None)
def ebch_dimensions(m: int) -> dict[int, int]:
    """Map each achievable eBCH dimension k' to its smallest designed distance."""
    order = (1 << m) - 1
    dims: dict[int, int] = {}
    for delta in range(1, order + 1):
        k = order - len(_root_union(m, delta))
        if k < 1:
            break
        dims.setdefault(k, delta)
    return dims


@dataclass(frozen=True, eq=False)
class EbchCode:
    n: int
    k_prime: int
    designed_distance: int
    H: np.ndarray
    field: FieldGF2m

    @property
    def extension_index(self) -> int:
        return self.n - 1


def ebch_parity_check(m: int, k_prime: int, primitive_poly=None) -> EbchCode:
    """Parity-check matrix of the (2^m, k_prime) extended primitive BCH code.

    Rows: binary expansions of ``x_t^j`` for one representative ``j`` per
    cyclotomic coset among the roots ``1..delta-1``, followed by the overall
    parity row. ``rank(H) = n - k_prime``.
    """
    field = build_field(m, primitive_poly)
    dims = ebch_dimensions(m)
    if k_prime not in dims:
        below = max((d for d in dims if d < k_prime), default=None)
        above = min((d for d in dims if d > k_prime), default=None)
        raise InvalidArgument(
            f"k'={k_prime} is not an eBCH dimension for n={1 << m}; "
            f"nearest achievable: {below}, {above}"
        )
    delta = dims[k_prime]
    n = 1 << m
    roots = _root_union(m, delta)
    reps = sorted(min(c) for c in cyclotomic_cosets(m) if set(c) & roots)
    pts = coordinate_elements(field)
    rows = []
    for j in reps:
        vals = np.array([field.power(int(x), j) for x in pts], dtype=np.int64)
        for b in range(m):
            rows.append((vals >> b) & 1)
    rows.append(np.ones(n, dtype=np.int64))
    H = np.array(rows, dtype=np.uint8)
    # conjugate-free representatives may still be rank deficient for short cosets
    if rank_f2(H) != n - k_prime:
        H = _independent_rows(H)
    assert rank_f2(H) == n - k_prime
    H.setflags(write=False)
    return EbchCode(n=n, k_prime=k_prime, designed_distance=delta, H=H, field=field)


def _independent_rows(H: np.ndarray) -> np.ndarray:
    keep = []
    for r in range(H.shape[0]):
        trial = keep + [r]
        if rank_f2(H[trial]) == len(trial):
            keep = trial
    return H[keep]
