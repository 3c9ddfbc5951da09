"""CRC polynomials in Koopman notation and systematic CRC encoding.

Convention: the first message bit is the highest-degree coefficient, zero
initial register, no reflection, no final XOR.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidArgument
from .f2kernel import as_bits


@dataclass(frozen=True)
class CrcPoly:
    """Generator g(x); ``value`` has bit i = coefficient of x^i."""

    value: int

    def __post_init__(self):
        if self.value < 3 or not self.value & 1:
            raise InvalidArgument(f"g(x)={self.value:#x} needs degree >= 1 and constant term 1")

    @property
    def ell(self) -> int:
        return self.value.bit_length() - 1

    @property
    def coeffs(self) -> tuple[int, ...]:
        """Coefficients from x^ell down to x^0."""
        return tuple((self.value >> i) & 1 for i in range(self.ell, -1, -1))

    @property
    def koopman(self) -> int:
        return self.value >> 1

    def __str__(self) -> str:
        return koopman_str(self)

    def describe(self) -> str:
        terms = []
        for i in range(self.ell, -1, -1):
            if (self.value >> i) & 1:
                terms.append("1" if i == 0 else ("x" if i == 1 else f"x^{i}"))
        return " + ".join(terms)


def koopman_to_poly(hex_value) -> CrcPoly:
    """Koopman value K (int or '0x..' string) -> g(x) = 2K + 1."""
    if isinstance(hex_value, str):
        hex_value = int(hex_value, 16)
    if hex_value <= 0:
        raise InvalidArgument("Koopman value must be positive")
    return CrcPoly(2 * int(hex_value) + 1)


def poly_to_koopman(poly: CrcPoly) -> int:
    return poly.koopman


def koopman_str(poly: CrcPoly) -> str:
    return f"0x{poly.koopman:X}"


def crc_bits(message, poly: CrcPoly) -> np.ndarray:
    """Remainder of message(x) * x^ell mod g(x), as ell bits (highest degree first)."""
    msg = as_bits(message, "message").ravel()
    ell = poly.ell
    g = poly.value
    top = 1 << ell
    reg = 0
    for b in msg:
        reg = (reg << 1) | int(b)
        if reg & top:
            reg ^= g
    for _ in range(ell):
        reg <<= 1
        if reg & top:
            reg ^= g
    return np.array([(reg >> i) & 1 for i in range(ell - 1, -1, -1)], dtype=np.uint8)


@lru_cache(maxsize=256)
def _generator(k: int, value: int) -> np.ndarray:
    poly = CrcPoly(value)
    out = np.zeros((k, poly.ell), dtype=np.uint8)
    e = np.zeros(k, dtype=np.uint8)
    for i in range(k):
        e[:] = 0
        e[i] = 1
        out[i] = crc_bits(e, poly)
    out.setflags(write=False)
    return out


def crc_generator(k: int, poly: CrcPoly) -> np.ndarray:
    """k x ell matrix G with crc_bits(m) = m @ G (mod 2)."""
    return _generator(int(k), poly.value)


def crc_bits_batch(messages: np.ndarray, poly: CrcPoly) -> np.ndarray:
    """Row-wise CRC of a (B, k) bit array via the linear generator."""
    msgs = np.atleast_2d(messages)
    G = crc_generator(msgs.shape[1], poly)
    return ((msgs.astype(np.int64) @ G) & 1).astype(np.uint8)


def enumerate_polys(ell: int):
    """All degree-ell generators with constant term 1, ascending Koopman value."""
    if not 1 <= ell <= 16:
        raise InvalidArgument(f"ell must be in 1..16, got {ell}")
    for koop in range(1 << (ell - 1), 1 << ell):
        yield koopman_to_poly(koop)
