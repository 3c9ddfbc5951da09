"""Gaussian-approximation density evolution for bit-channel reliabilities."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import ndtr

from ..errors import InvalidArgument
from ..f2kernel import log2_exact
from . import jfunc


@dataclass(frozen=True, eq=False)
class Reliabilities:
    """Per-index LLR spread ``sigmas`` and mutual information ``values``.

    ``design_snr_db`` is Eb/N0; ``rate`` fixes the Es/N0 used for the channel.
    """

    n: int
    design_snr_db: float
    rate: float
    sigmas: np.ndarray

    @property
    def values(self) -> np.ndarray:
        return np.exp(jfunc.log_j(self.sigmas))

    def bit_error_probs(self) -> np.ndarray:
        """Q(sigma_i / 2): error probability of a genie-aided SC decision."""
        return ndtr(-self.sigmas / 2.0)

    def order(self) -> np.ndarray:
        """Indices from least to most reliable; ties keep the lower index first."""
        return np.argsort(self.sigmas, kind="stable")


def channel_sigma(snr_db: float, rate: float) -> float:
    """Std. deviation of the BPSK channel LLR at Eb/N0 ``snr_db``."""
    return float(np.sqrt(8.0 * rate * 10.0 ** (snr_db / 10.0)))


def _minus(sig: np.ndarray) -> np.ndarray:
    # I- = 1 - J(sqrt2 * J^-1(1 - I)), evaluated on logs end to end
    dual = jfunc.sigma_from_log_j(jfunc.log_jc(sig))
    return jfunc.sigma_from_log_jc(jfunc.log_j(np.sqrt(2.0) * dual))


@lru_cache(maxsize=64)
def _ga(n: int, sigma_ch: float) -> np.ndarray:
    m = log2_exact(n)
    sig = np.array([sigma_ch])
    for _ in range(m):
        nxt = np.empty(2 * sig.size)
        nxt[0::2] = _minus(sig)
        nxt[1::2] = np.sqrt(2.0) * sig
        sig = nxt
    sig.setflags(write=False)
    return sig


def ga_reliabilities(n: int, design_snr_db: float, rate: float) -> Reliabilities:
    """GA-DE reliabilities of the n synthetic channels of F^{(x)log2 n}.

    Index order is natural: the most significant bit of ``i`` picks the
    first (channel-side) polarization step. ``design_snr_db=inf`` gives the
    noiseless limit.
    """
    log2_exact(n)
    if not 0.0 < rate <= 1.0:
        raise InvalidArgument(f"rate must lie in (0, 1], got {rate}")
    if np.isposinf(design_snr_db):
        sig = np.full(n, np.inf)
    else:
        sig = _ga(int(n), channel_sigma(design_snr_db, rate))
    return Reliabilities(n=int(n), design_snr_db=float(design_snr_db), rate=float(rate), sigmas=sig)
