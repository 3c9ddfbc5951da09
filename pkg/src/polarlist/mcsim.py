"""BPSK / AWGN channel and seeded Monte-Carlo FER measurement.

Every frame draws its message and noise from its own Philox stream keyed by
(seed, snr index) with the frame index in the counter, so a run is
reproducible bit for bit no matter how frames are spread over workers.
Frames are processed in fixed-size chunks in order; the run stops after the
first chunk at which the error count reaches ``min_errors``.
"""
from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .codec import LLR_CLAMP, Decoder, encode
from .construct.codespec import CodeSpec
from .crc import CrcPoly
from .errors import InvalidArgument

DECODERS = ("sc", "scl", "scl-crc")


def noise_sigma(snr_db: float, rate: float) -> float:
    """Per-dimension noise std for unit-energy BPSK at Eb/N0 = snr_db."""
    if not 0.0 < rate <= 1.0:
        raise InvalidArgument(f"rate must lie in (0, 1], got {rate}")
    es_n0 = rate * 10.0 ** (snr_db / 10.0)
    return float(np.sqrt(1.0 / (2.0 * es_n0)))


def channel(codeword, snr_db: float, rate: float, rng: np.random.Generator) -> np.ndarray:
    """LLRs ``2y / sigma^2`` for ``y = (1 - 2c) + noise``, clamped to +-40."""
    c = np.asarray(codeword)
    sigma = noise_sigma(snr_db, rate)
    y = (1.0 - 2.0 * c) + sigma * rng.standard_normal(c.shape)
    return np.clip(2.0 * y / sigma**2, -LLR_CLAMP, LLR_CLAMP)


def frame_rng(seed: int, snr_index: int, frame: int) -> np.random.Generator:
    key = (int(seed) & (2**64 - 1)) | ((int(snr_index) & (2**64 - 1)) << 64)
    return np.random.Generator(np.random.Philox(counter=[0, 0, 0, int(frame)], key=key))


@dataclass(frozen=True)
class FerPoint:
    snr_db: float
    frames: int
    frame_errors: int
    fer: float
    seed: int
    hit_max_frames: bool = False

    def __post_init__(self):
        if not 0 <= self.frame_errors <= self.frames:
            raise InvalidArgument("need 0 <= frame_errors <= frames")


@dataclass
class SweepConfig:
    snr_db: Sequence[float]
    L: int = 1
    min_errors: int = 100
    max_frames: int = 10**7
    seed: int = 0
    decoder: str = "sc"
    crc: CrcPoly | None = None
    chunk_frames: int = 1000
    min_sum: bool = False
    snr_offset: int = 0  # first snr index used for stream keys
    labels: dict = field(default_factory=dict)

    def __post_init__(self):
        self.snr_db = [float(s) for s in self.snr_db]
        if not self.snr_db:
            raise InvalidArgument("snr list must be nonempty")
        if self.min_errors < 1:
            raise InvalidArgument("min_errors must be >= 1")
        if self.max_frames < 1 or self.chunk_frames < 1:
            raise InvalidArgument("max_frames and chunk_frames must be >= 1")
        if self.decoder not in DECODERS:
            raise InvalidArgument(f"decoder must be one of {DECODERS}")
        if self.decoder == "scl-crc" and self.crc is None:
            raise InvalidArgument("decoder 'scl-crc' needs a CRC polynomial")
        if self.decoder == "sc" and self.L != 1:
            raise InvalidArgument("the SC decoder has list size 1")


def make_decoder(code: CodeSpec, cfg: SweepConfig) -> Decoder:
    crc = cfg.crc if cfg.decoder == "scl-crc" else None
    return Decoder(code, cfg.L, crc=crc, min_sum=cfg.min_sum)


def _frames(code: CodeSpec, snr_db: float, seed: int, snr_index: int, start: int, count: int):
    msgs = np.empty((count, code.k), np.uint8)
    noise = np.empty((count, code.n))
    for r in range(count):
        g = frame_rng(seed, snr_index, start + r)
        msgs[r] = g.integers(0, 2, code.k, dtype=np.uint8)
        noise[r] = g.standard_normal(code.n)
    sigma = noise_sigma(snr_db, code.rate)
    y = (1.0 - 2.0 * encode(code, msgs)) + sigma * noise
    return msgs, np.clip(2.0 * y / sigma**2, -LLR_CLAMP, LLR_CLAMP)


def _run_chunk(code, decoder, snr_db, seed, snr_index, start, count) -> int:
    msgs, llrs = _frames(code, snr_db, seed, snr_index, start, count)
    out, ok = decoder.decode_batch(llrs)
    return int(np.count_nonzero(np.any(out != msgs, axis=1) | ~ok))


def measure_point(code: CodeSpec, cfg: SweepConfig, snr_index: int, threads: int = 1) -> FerPoint:
    snr = cfg.snr_db[snr_index]
    key_index = cfg.snr_offset + snr_index
    decoders = [make_decoder(code, cfg) for _ in range(max(1, threads))]
    frames = errors = 0
    start = 0
    with ThreadPoolExecutor(max_workers=len(decoders)) as pool:
        while frames < cfg.max_frames and errors < cfg.min_errors:
            wave = []
            for w, dec in enumerate(decoders):
                s = start + w * cfg.chunk_frames
                cnt = min(cfg.chunk_frames, cfg.max_frames - s)
                if cnt <= 0:
                    break
                wave.append((cnt, pool.submit(_run_chunk, code, dec, snr, cfg.seed, key_index, s, cnt)))
            for cnt, fut in wave:  # consume in order; later chunks are dropped once we stop
                e = fut.result()
                if frames >= cfg.max_frames or errors >= cfg.min_errors:
                    continue
                frames += cnt
                errors += e
            start += len(wave) * cfg.chunk_frames
    return FerPoint(
        snr_db=snr,
        frames=frames,
        frame_errors=errors,
        fer=errors / frames,
        seed=cfg.seed,
        hit_max_frames=errors < cfg.min_errors,
    )


def measure_fer(code: CodeSpec, cfg: SweepConfig, threads: int = 1) -> list[FerPoint]:
    """FER at every SNR of the sweep."""
    return [measure_point(code, cfg, i, threads) for i in range(len(cfg.snr_db))]


def fer_stderr(p: FerPoint) -> float:
    return float(np.sqrt(max(p.fer * (1.0 - p.fer), 0.0) / p.frames))


def write_fer_csv(path, points: Sequence[FerPoint]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["snr_db", "frames", "frame_errors", "fer"])
        for p in points:
            w.writerow([f"{p.snr_db:.6g}", p.frames, p.frame_errors, f"{p.fer:.5e}"])


def read_fer_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return [
            {"snr_db": float(r["snr_db"]), "frames": int(r["frames"]),
             "frame_errors": int(r["frame_errors"]), "fer": float(r["fer"])}
            for r in csv.DictReader(fh)
        ]
