"""Encoder, SC decoder and LLR-based SCL decoder with dynamic freezing.

LLR sign convention: positive means bit 0 is more likely. Input LLRs are
clamped to +-LLR_CLAMP. The decoding tree follows ``c = u F^{(x)m}`` in
natural order: a node of size 2s splits its codeword as (v_a + v_b, v_b),
the left child sees f(l_j, l_{j+s}), the right child sees
l_{j+s} + (1 - 2 v_a[j]) l_j.

Per-path state is stored layer by layer in arrays of length n - 1: depth
d in 1..m occupies ``[n - n >> (d-1), n - n >> d)``. ``alpha`` holds LLRs
and ``lbuf`` the partial sums of completed left children.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .crc import CrcPoly, crc_bits_batch, crc_generator
from .errors import InvalidArgument, ResourceError
from .f2kernel import polar_transform
from .construct.codespec import DYNAMIC, FROZEN, INFO, CodeSpec

LLR_CLAMP = 40.0
# L * n above this many cells raises ResourceError (about 24 bytes per cell).
MAX_LIST_CELLS = 1 << 24

MODE_BEST, MODE_CRC = 0, 1


def set_memory_cap(cells: int) -> int:
    """Set the L * n cap; returns the previous value."""
    global MAX_LIST_CELLS
    old, MAX_LIST_CELLS = MAX_LIST_CELLS, int(cells)
    return old


def _check_budget(L: int, n: int) -> None:
    if L < 1:
        raise InvalidArgument(f"list size must be >= 1, got {L}")
    if L * n > MAX_LIST_CELLS:
        raise ResourceError(f"list size {L} at n={n} exceeds the memory cap of {MAX_LIST_CELLS} cells")


# ---------------------------------------------------------------------------
# encoding


def assemble_u(code: CodeSpec, message) -> np.ndarray:
    """u-vector(s) for message(s) of shape (..., k)."""
    msg = np.asarray(message, dtype=np.uint8)
    if msg.shape[-1:] != (code.k,):
        raise InvalidArgument(f"message length must be k={code.k}, got {msg.shape[-1:]}")
    if np.any(msg > 1):
        raise InvalidArgument("message must be binary")
    u = np.zeros(msg.shape[:-1] + (code.n,), dtype=np.uint8)
    u[..., code.info_positions] = msg
    for t, srcs in code.sources.items():  # sources precede targets, all info
        u[..., t] = np.bitwise_xor.reduce(u[..., list(srcs)], axis=-1)
    return u


def encode(code: CodeSpec, message) -> np.ndarray:
    """Codeword(s) ``assemble_u(message) F^{(x)m}``."""
    return polar_transform(assemble_u(code, message))


# ---------------------------------------------------------------------------
# kernels


@njit(cache=True, nogil=True, inline="always")
def _f(a, b, min_sum):
    s = min(abs(a), abs(b))
    if (a < 0.0) != (b < 0.0):
        s = -s
    if min_sum:
        return s
    # log1p(e^-|a+b|) - log1p(e^-|a-b|) folded into a single log1p
    ep = math.exp(-abs(a + b))
    em = math.exp(-abs(a - b))
    return s + math.log1p((ep - em) / (1.0 + em))


@njit(cache=True, nogil=True)
def _update_llr(alpha, lbuf, l, ch, i, m, n, min_sum):
    # LLRs of row l along the path from the deepest common ancestor of
    # leaves i-1 and i. Rows are indexed in place: passing row views costs
    # more than the arithmetic at these sizes.
    if i == 0:
        d0 = 1
    else:
        t = 0
        while not (i >> t) & 1:
            t += 1
        dg = m - t
        s = n >> dg
        o = n - (n >> (dg - 1))
        if dg == 1:
            for j in range(s):
                if lbuf[l, o + j]:
                    alpha[l, o + j] = ch[j + s] - ch[j]
                else:
                    alpha[l, o + j] = ch[j + s] + ch[j]
        else:
            po = n - (n >> (dg - 2))
            for j in range(s):
                if lbuf[l, o + j]:
                    alpha[l, o + j] = alpha[l, po + j + s] - alpha[l, po + j]
                else:
                    alpha[l, o + j] = alpha[l, po + j + s] + alpha[l, po + j]
        d0 = dg + 1
    for d in range(d0, m + 1):
        s = n >> d
        o = n - (n >> (d - 1))
        if d == 1:
            for j in range(s):
                alpha[l, o + j] = _f(ch[j], ch[j + s], min_sum)
        else:
            po = n - (n >> (d - 2))
            for j in range(s):
                alpha[l, o + j] = _f(alpha[l, po + j], alpha[l, po + j + s], min_sum)


@njit(cache=True, nogil=True)
def _propagate(lbuf, l, tmp, bit, i, m, n):
    # Fold the decided bit into partial sums up to the first left ancestor.
    tmp[0] = bit
    size = 1
    d = m
    while d > 0:
        o = n - (n >> (d - 1))
        if not (i >> (m - d)) & 1:
            for j in range(size):
                lbuf[l, o + j] = tmp[j]
            return
        for j in range(size):
            tmp[j + size] = tmp[j]
            tmp[j] ^= lbuf[l, o + j]
        size *= 2
        d -= 1


@njit(cache=True, nogil=True)
def _frozen_value(u, l, i, kind, sptr, sidx):
    if kind != 2:
        return 0
    v = 0
    for q in range(sptr[i], sptr[i + 1]):
        v ^= u[l, sidx[q]]
    return v


@njit(cache=True, nogil=True)
def _sc_frame(ch, kinds, sptr, sidx, m, n, min_sum, alpha, lbuf, u, tmp):
    for i in range(n):
        _update_llr(alpha, lbuf, 0, ch, i, m, n, min_sum)
        lam = alpha[0, n - 2]
        if kinds[i] == 0:
            b = 1 if lam < 0.0 else 0
        else:
            b = _frozen_value(u, 0, i, kinds[i], sptr, sidx)
        u[0, i] = b
        _propagate(lbuf, 0, tmp, b, i, m, n)


@njit(cache=True, nogil=True)
def _copy_path(src, dst, i, alpha, lbuf, u):
    # explicit loops: numba's 2-D row slice assignment is much slower
    for j in range(alpha.shape[1]):
        alpha[dst, j] = alpha[src, j]
        lbuf[dst, j] = lbuf[src, j]
    for j in range(i):
        u[dst, j] = u[src, j]


@njit(cache=True, nogil=True)
def _scl_frame(ch, L, kinds, sptr, sidx, m, n, min_sum, alpha, lbuf, u, pm, tmp,
               cand, alive, free, trace, tr_parent, tr_metric, stats):
    # stats[0] receives the smallest metric among all pruned candidates
    npaths = 1
    pm[0] = 0.0
    stats[0] = np.inf
    for i in range(n):
        for l in range(npaths):
            _update_llr(alpha, lbuf, l, ch, i, m, n, min_sum)
        if trace:
            for l in range(L):
                tr_parent[i, l] = l if l < npaths else -1
        if kinds[i] != 0:
            for l in range(npaths):
                lam = alpha[l, n - 2]
                b = _frozen_value(u, l, i, kinds[i], sptr, sidx)
                hard = 1 if lam < 0.0 else 0
                if b != hard:
                    pm[l] += abs(lam)
                u[l, i] = b
                _propagate(lbuf, l, tmp, b, i, m, n)
        else:
            nc = 2 * npaths
            for l in range(npaths):
                lam = alpha[l, n - 2]
                if lam < 0.0:
                    cand[2 * l] = pm[l] - lam
                    cand[2 * l + 1] = pm[l]
                else:
                    cand[2 * l] = pm[l]
                    cand[2 * l + 1] = pm[l] + lam
            if nc <= L:
                for l in range(npaths):
                    dst = npaths + l
                    _copy_path(l, dst, i, alpha, lbuf, u)
                    u[dst, i] = 1
                    pm[dst] = cand[2 * l + 1]
                    _propagate(lbuf, dst, tmp, 1, i, m, n)
                    u[l, i] = 0
                    pm[l] = cand[2 * l]
                    _propagate(lbuf, l, tmp, 0, i, m, n)
                    if trace:
                        tr_parent[i, dst] = l
                npaths = nc
            else:
                order = np.argsort(cand[:nc], kind="mergesort")
                if cand[order[L]] < stats[0]:
                    stats[0] = cand[order[L]]
                alive[:nc] = False
                for r in range(L):
                    alive[order[r]] = True
                nfree = 0
                for l in range(npaths):
                    if not alive[2 * l] and not alive[2 * l + 1]:
                        free[nfree] = l
                        nfree += 1
                        if trace:
                            tr_parent[i, l] = -1
                for l in range(npaths, L):
                    free[nfree] = l
                    nfree += 1
                fi = 0
                for l in range(npaths):
                    a0 = alive[2 * l]
                    a1 = alive[2 * l + 1]
                    if a0 and a1:
                        dst = free[fi]
                        fi += 1
                        _copy_path(l, dst, i, alpha, lbuf, u)
                        u[dst, i] = 1
                        pm[dst] = cand[2 * l + 1]
                        _propagate(lbuf, dst, tmp, 1, i, m, n)
                        if trace:
                            tr_parent[i, dst] = l
                    if a0:
                        u[l, i] = 0
                        pm[l] = cand[2 * l]
                        _propagate(lbuf, l, tmp, 0, i, m, n)
                    elif a1:
                        u[l, i] = 1
                        pm[l] = cand[2 * l + 1]
                        _propagate(lbuf, l, tmp, 1, i, m, n)
                npaths = L
        if trace:
            for l in range(L):
                tr_metric[i, l] = pm[l] if l < npaths else np.inf
    return npaths


@njit(cache=True, nogil=True)
def _clamp_into(dst, src, clamp):
    for j in range(src.shape[0]):
        x = src[j]
        if x > clamp:
            x = clamp
        elif x < -clamp:
            x = -clamp
        dst[j] = x


@njit(cache=True, nogil=True)
def _crc_ok(u, l, info, gsrc_ptr, gsrc_idx, kpay, ell):
    for j in range(ell):
        v = 0
        for q in range(gsrc_ptr[j], gsrc_ptr[j + 1]):
            v ^= u[l, info[gsrc_idx[q]]]
        if v != u[l, info[kpay + j]]:
            return False
    return True


@njit(cache=True, nogil=True)
def _decode_batch(llrs, L, kinds, sptr, sidx, m, min_sum, info, mode,
                  gsrc_ptr, gsrc_idx, kpay, ell, out, ok):
    F, n = llrs.shape
    ch = np.empty(n, np.float64)
    tmp = np.empty(n, np.uint8)
    alpha = np.empty((L, n - 1), np.float64)
    lbuf = np.zeros((L, n - 1), np.uint8)
    u = np.zeros((L, n), np.uint8)
    pm = np.zeros(L, np.float64)
    cand = np.empty(2 * L, np.float64)
    alive = np.zeros(2 * L, np.bool_)
    free = np.empty(L, np.int64)
    dummy_p = np.empty((1, 1), np.int64)
    dummy_m = np.empty((1, 1), np.float64)
    stats = np.empty(1, np.float64)
    kout = out.shape[1]
    for fr in range(F):
        _clamp_into(ch, llrs[fr], 40.0)
        if L == 1 and mode == 0:
            _sc_frame(ch, kinds, sptr, sidx, m, n, min_sum, alpha, lbuf, u, tmp)
            for q in range(kout):
                out[fr, q] = u[0, info[q]]
            ok[fr] = True
            continue
        npaths = _scl_frame(ch, L, kinds, sptr, sidx, m, n, min_sum, alpha, lbuf, u, pm,
                            tmp, cand, alive, free, False, dummy_p, dummy_m, stats)
        order = np.argsort(pm[:npaths], kind="mergesort")
        pick = -1
        if mode == 0:
            pick = order[0]
        else:
            for r in range(npaths):
                if _crc_ok(u, order[r], info, gsrc_ptr, gsrc_idx, kpay, ell):
                    pick = order[r]
                    break
        if pick < 0:
            ok[fr] = False
            pick = order[0]
        else:
            ok[fr] = True
        for q in range(kout):
            out[fr, q] = u[pick, info[q]]


# ---------------------------------------------------------------------------
# Python API


@dataclass
class Trace:
    """Per-step survivor bookkeeping: ``parent[i, slot]`` and ``metric[i, slot]``."""

    parent: np.ndarray
    metric: np.ndarray


@dataclass
class DecodeList:
    """SCL output sorted by ascending path metric."""

    messages: np.ndarray
    codewords: np.ndarray
    metrics: np.ndarray
    u: np.ndarray
    prune_floor: float = np.inf  # smallest metric of any pruned candidate
    trace: Trace | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.metrics)

    @property
    def candidates(self) -> list[tuple[np.ndarray, np.ndarray, float]]:
        return [(self.messages[r], self.codewords[r], float(self.metrics[r])) for r in range(len(self))]


def _schedule(code: CodeSpec):
    ptr, idx = code.source_arrays()
    return code.kinds.astype(np.int8), ptr, idx


def _as_llrs(code: CodeSpec, llrs) -> np.ndarray:
    x = np.asarray(llrs, dtype=np.float64)
    if x.shape[-1:] != (code.n,):
        raise InvalidArgument(f"LLR vector length must be n={code.n}, got {x.shape[-1:]}")
    if np.isnan(x).any():
        raise InvalidArgument("LLRs contain NaN")
    return np.clip(x, -LLR_CLAMP, LLR_CLAMP)


def sc_decode(code: CodeSpec, llrs, min_sum: bool = False) -> np.ndarray:
    """SC decoding; returns message bits of shape (..., k)."""
    x = _as_llrs(code, llrs)
    flat = x.reshape(-1, code.n)
    kinds, ptr, idx = _schedule(code)
    n, m = code.n, code.m
    alpha = np.empty((1, n - 1))
    lbuf = np.zeros((1, n - 1), np.uint8)
    tmp = np.empty(n, np.uint8)
    u = np.zeros((flat.shape[0], n), np.uint8)
    for r in range(flat.shape[0]):
        _sc_frame(flat[r], kinds, ptr, idx, m, n, min_sum, alpha, lbuf, u[r : r + 1], tmp)
    return u[:, code.info_positions].reshape(x.shape[:-1] + (code.k,))


def scl_decode(code: CodeSpec, llrs, L: int, min_sum: bool = False, trace: bool = False) -> DecodeList:
    """SCL decoding of one frame; returns every surviving path."""
    n, m = code.n, code.m
    _check_budget(L, n)
    ch = _as_llrs(code, llrs)
    if ch.ndim != 1:
        raise InvalidArgument("scl_decode takes a single LLR vector")
    kinds, ptr, idx = _schedule(code)
    alpha = np.empty((L, n - 1))
    lbuf = np.zeros((L, n - 1), np.uint8)
    u = np.zeros((L, n), np.uint8)
    pm = np.zeros(L)
    tmp = np.empty(n, np.uint8)
    cand = np.empty(2 * L)
    alive = np.zeros(2 * L, np.bool_)
    free = np.empty(L, np.int64)
    tp = np.full((n, L) if trace else (1, 1), -1, np.int64)
    tm = np.full((n, L) if trace else (1, 1), np.inf)
    stats = np.empty(1)
    npaths = _scl_frame(ch, L, kinds, ptr, idx, m, n, min_sum, alpha, lbuf, u, pm, tmp,
                        cand, alive, free, trace, tp, tm, stats)
    order = np.argsort(pm[:npaths], kind="stable")
    uu = u[order]
    return DecodeList(
        messages=uu[:, code.info_positions],
        codewords=polar_transform(uu),
        metrics=pm[order],
        u=uu,
        prune_floor=float(stats[0]),
        trace=Trace(tp, tm) if trace else None,
    )


def crc_parts(poly: CrcPoly, k_payload: int) -> tuple[np.ndarray, np.ndarray]:
    """CSR (ptr, idx): for each check bit, the payload bits it depends on."""
    G = crc_generator(k_payload, poly)
    ptr = [0]
    idx: list[int] = []
    for j in range(poly.ell):
        idx.extend(np.flatnonzero(G[:, j]).tolist())
        ptr.append(len(idx))
    return np.array(ptr, np.int64), np.array(idx, np.int64)


def pick_crc_pass(dlist: DecodeList, k_payload: int, poly: CrcPoly) -> np.ndarray | None:
    """Best-metric candidate whose trailing ell info bits match the CRC of the rest."""
    ell = poly.ell
    msgs = dlist.messages
    if len(dlist) == 0:
        return None
    if msgs.shape[1] != k_payload + ell:
        raise InvalidArgument(f"candidates carry {msgs.shape[1]} info bits, expected {k_payload + ell}")
    ok = np.all(crc_bits_batch(msgs[:, :k_payload], poly) == msgs[:, k_payload:], axis=1)
    hits = np.flatnonzero(ok)
    return None if len(hits) == 0 else msgs[hits[0], :k_payload].copy()


class Decoder:
    """Reusable batch decoder for one code.

    ``crc`` switches to CRC-aided selection: the list is decoded on the
    relaxed (n, k + ell) parent code and the best candidate passing the CRC
    is returned. Frames where no candidate passes report ``ok = False``.
    """

    def __init__(self, code: CodeSpec, L: int = 1, crc: CrcPoly | None = None, min_sum: bool = False):
        _check_budget(L, code.n)
        self.code = code
        self.L = int(L)
        self.crc = crc
        self.min_sum = bool(min_sum)
        if crc is not None:
            if code.family != "crc" or len(code.dynamic_positions) != crc.ell:
                raise InvalidArgument("CRC-aided decoding needs a CRC-polar code built with the same polynomial")
            self._dec_code = code.relaxed()
            self.k_payload = code.k
            self._gptr, self._gidx = crc_parts(crc, code.k)
            self._mode = MODE_CRC
        else:
            self._dec_code = code
            self.k_payload = code.k
            self._gptr, self._gidx = np.zeros(1, np.int64), np.zeros(0, np.int64)
            self._mode = MODE_BEST
        self._kinds, self._ptr, self._idx = _schedule(self._dec_code)
        self._info = self._dec_code.info_positions.astype(np.int64)

    def decode_batch(self, llrs) -> tuple[np.ndarray, np.ndarray]:
        """Decode frames of shape (F, n); returns (messages (F, k), ok (F,))."""
        x = np.ascontiguousarray(np.atleast_2d(np.asarray(llrs, dtype=np.float64)))
        if x.shape[1] != self.code.n:
            raise InvalidArgument(f"LLR frames must have length n={self.code.n}")
        if np.isnan(x).any():
            raise InvalidArgument("LLRs contain NaN")
        out = np.zeros((x.shape[0], self.k_payload), np.uint8)
        ok = np.zeros(x.shape[0], np.bool_)
        ell = 0 if self.crc is None else self.crc.ell
        _decode_batch(x, self.L, self._kinds, self._ptr, self._idx, self.code.m, self.min_sum,
                      self._info, self._mode, self._gptr, self._gidx, self.k_payload, ell, out, ok)
        return out, ok

    def decode(self, llrs) -> DecodeList:
        return scl_decode(self._dec_code, llrs, self.L, self.min_sum)


__all__ = [
    "LLR_CLAMP", "MAX_LIST_CELLS", "set_memory_cap", "assemble_u", "encode",
    "sc_decode", "scl_decode", "pick_crc_pass", "DecodeList", "Trace", "Decoder", "crc_parts",
]
