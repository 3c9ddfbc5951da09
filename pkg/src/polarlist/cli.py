"""Command-line front end.

    polarlist construct --family lwb --n 128 --k 64 --ndf 7 --preset paper-128-64 --out lwb.json
    polarlist spectrum --code lwb.json --lmax 16384 --snr-db 4 --out lwb_spec
    polarlist simulate --code lwb.json --list 32 --snr-db 1:0.5:3.5 --out lwb_fer.csv
    polarlist crc-search --n 128 --k 64 --ell 3:5 --out crc.csv
    polarlist recommend --code-a lwb.json --code-b ebch99.json --snr-db 4

Exit status: 0 success, 2 bad arguments, 3 resource cap exceeded.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import codefile
from .construct import (
    crc_polar,
    design,
    ebch_polar,
    estimate_sc_fer,
    lwb,
    lwb_preset,
    rm_polar,
    select_frozen,
)
from .construct.families import PRESETS
from .construct.recommend import bracket_crossover, compare
from .crc import koopman_to_poly
from .errors import InvalidArgument, ResourceError
from .galois import ebch_parity_check

EXIT_OK, EXIT_ARGS, EXIT_RESOURCE = 0, 2, 3


def parse_snr_range(text: str) -> list[float]:
    """``A:STEP:B`` (inclusive), ``a,b,c`` or a single value."""
    try:
        if ":" in text:
            a, step, b = (float(x) for x in text.split(":"))
            if step <= 0 or b < a:
                raise ValueError
            count = int(np.floor((b - a) / step + 1e-9)) + 1
            return [round(a + i * step, 10) for i in range(count)]
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad SNR range {text!r}; use A:STEP:B or a,b,c") from None


def parse_ell(text: str) -> list[int]:
    try:
        if ":" in text:
            a, b = (int(x) for x in text.split(":"))
            return list(range(a, b + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad CRC length range {text!r}") from None


def parse_pow2(text: str) -> int:
    if text.startswith("2^"):
        v = 1 << int(text[2:])
    else:
        v = int(text)
    if v < 1 or v & (v - 1):
        raise argparse.ArgumentTypeError(f"{text!r} is not a power of two")
    return v


def _poly(text):
    return koopman_to_poly(text)


# ---------------------------------------------------------------------------


def cmd_construct(args) -> int:
    rel = design(args.n, args.k, args.design_snr_db)
    fam = args.family
    if fam == "polar":
        code = select_frozen(rel, args.k)
    elif fam == "rm":
        if args.w is None:
            raise InvalidArgument("--family rm needs --w")
        code = rm_polar(rel, args.k, args.w)
    elif fam == "crc":
        if args.poly is None:
            raise InvalidArgument("--family crc needs --poly")
        code = crc_polar(rel, args.k, _poly(args.poly))
    elif fam == "ebch":
        if args.kprime is None:
            raise InvalidArgument("--family ebch needs --kprime")
        code = ebch_polar(rel, args.k, ebch_parity_check(args.n.bit_length() - 1, args.kprime))
    else:
        if args.preset:
            n, k, rows = PRESETS[args.preset]
            if (args.n, args.k) != (n, k) or args.ndf not in (None, len(rows)):
                raise InvalidArgument(f"preset {args.preset} fixes n={n}, k={k}, ndf={len(rows)}")
            code = lwb_preset(rel, args.preset)
        else:
            if args.ndf is None:
                raise InvalidArgument("--family lwb needs --ndf")
            code = lwb(rel, args.k, args.ndf, search_budget=args.search_budget, seed=args.seed)
    codefile.save(code, args.out)
    print(f"{code!r} -> {args.out}")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    from .spectrum import converge, union_bound, write_spectrum

    code = codefile.load(args.code)
    crc = _poly(args.crc_filter) if args.crc_filter else None
    spec, hist = converge(
        code, args.lstart, args.lmax, args.snr_db, args.tol, crc, args.probe_snr_db, args.seed, args.trials
    )
    if not spec.entries:
        print("probe found no nonzero codewords")
        return EXIT_OK
    rep = union_bound(spec, args.snr_db, code.rate)
    write_spectrum(args.out, spec, args.snr_db, code.rate)
    for L, p in hist:
        print(f"L={L:<8d} P_UB={p:.5e}")
    print(f"d_min={rep.d_min} A_min={rep.A_min} P_UB={rep.p_ub:.5e} P_AUB_min={rep.p_aub_min:.5e} converged={spec.converged}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    from .mcsim import SweepConfig, measure_fer, write_fer_csv

    code = codefile.load(args.code)
    crc = _poly(args.crc) if args.crc else None
    decoder = "scl-crc" if crc else ("sc" if args.list == 1 else "scl")
    cfg = SweepConfig(
        snr_db=args.snr_db,
        L=args.list,
        min_errors=args.min_errors,
        max_frames=args.max_frames,
        seed=args.seed,
        decoder=decoder,
        crc=crc,
        chunk_frames=args.chunk_frames,
    )
    points = measure_fer(code, cfg, threads=args.threads)
    write_fer_csv(args.out, points)
    for p in points:
        flag = " (max frames)" if p.hit_max_frames else ""
        print(f"{p.snr_db:g} dB  frames={p.frames} errors={p.frame_errors} fer={p.fer:.5e}{flag}")
    return EXIT_OK


def cmd_crc_search(args) -> int:
    from .spectrum import crc_search, write_crc_table

    rows = crc_search(args.n, args.k, args.ell, args.design_snr_db, args.lmax, args.snr_db,
                      args.lstart, args.seed, args.probe_snr_db)
    write_crc_table(args.out, rows)
    best = {}
    for r in rows:
        best.setdefault(r.ell, r)
    for ell, r in sorted(best.items()):
        print(f"ell={ell} best={r.poly} aub={r.aub:.5e} sc_fer={r.sc_fer:.5e}")
    return EXIT_OK


def cmd_recommend(args) -> int:
    from .spectrum import converge

    a, b = codefile.load(args.code_a), codefile.load(args.code_b)
    if (a.n, a.k) != (b.n, b.k):
        raise InvalidArgument("codes must share (n, k)")
    spectra = [
        converge(c, args.lstart, args.lmax, args.snr_db, probe_snr_db=args.probe_snr_db,
                 seed=args.seed, trials=args.trials)[0]
        for c in (a, b)
    ]
    v = compare(a, b, args.snr_db, spectra)
    print(v.report(args.code_a, args.code_b))
    if args.bracket_lists:
        rows, bracket = bracket_crossover(a, b, args.snr_db, args.bracket_lists, args.min_errors,
                                          args.max_frames, args.seed, args.threads)
        print()
        print("L        fer_a        fer_b")
        for L, fa, fb in rows:
            print(f"{L:<8d} {fa:.5e}  {fb:.5e}")
        print("L' bracket: " + (f"{bracket[0]} < L' <= {bracket[1]}" if bracket else "no change of winner"))
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polarlist", description="polar code construction and evaluation")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a code and write its JSON description")
    c.add_argument("--family", required=True, choices=["polar", "rm", "crc", "ebch", "lwb"])
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--design-snr-db", type=float, default=4.0)
    c.add_argument("--w", type=int, help="minimum row weight (rm)")
    c.add_argument("--poly", help="CRC polynomial, Koopman hex (crc)")
    c.add_argument("--kprime", type=int, help="eBCH dimension (ebch)")
    c.add_argument("--ndf", type=int, help="number of dynamically frozen bits (lwb)")
    c.add_argument("--preset", choices=sorted(PRESETS), help="explicit LWB constraint set")
    c.add_argument("--search-budget", type=int, default=200)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_construct)

    s = sub.add_parser("spectrum", help="probe the distance spectrum and evaluate the union bound")
    s.add_argument("--code", required=True)
    s.add_argument("--lmax", type=parse_pow2, default=1 << 14)
    s.add_argument("--lstart", type=parse_pow2, default=32)
    s.add_argument("--probe-snr-db", type=float, default=10.0)
    s.add_argument("--snr-db", type=float, default=4.0)
    s.add_argument("--tol", type=float, default=0.01)
    s.add_argument("--crc-filter")
    s.add_argument("--probe-trials", dest="trials", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True, help="output prefix for .csv and .json")
    s.set_defaults(func=cmd_spectrum)

    m = sub.add_parser("simulate", help="Monte-Carlo FER over an SNR range")
    m.add_argument("--code", required=True)
    m.add_argument("--list", type=int, default=1)
    m.add_argument("--snr-db", type=parse_snr_range, required=True)
    m.add_argument("--min-errors", type=int, default=100)
    m.add_argument("--max-frames", type=int, default=10**7)
    m.add_argument("--chunk-frames", type=int, default=1000)
    m.add_argument("--crc", help="CRC-aided selection with this polynomial")
    m.add_argument("--threads", type=int, default=1)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--out", required=True)
    m.set_defaults(func=cmd_simulate)

    q = sub.add_parser("crc-search", help="rank all CRC polynomials of the given lengths")
    q.add_argument("--n", type=int, default=128)
    q.add_argument("--k", type=int, default=64)
    q.add_argument("--ell", type=parse_ell, required=True, help="length or range a:b")
    q.add_argument("--design-snr-db", type=float, default=4.0)
    q.add_argument("--snr-db", type=float, default=4.0)
    q.add_argument("--lmax", type=parse_pow2, default=1 << 14)
    q.add_argument("--lstart", type=parse_pow2, default=32)
    q.add_argument("--probe-snr-db", type=float, default=10.0)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_crc_search)

    r = sub.add_parser("recommend", help="compare two codes by SC-FER estimate and union bound")
    r.add_argument("--code-a", required=True)
    r.add_argument("--code-b", required=True)
    r.add_argument("--snr-db", type=float, default=4.0)
    r.add_argument("--lmax", type=parse_pow2, default=1 << 14)
    r.add_argument("--lstart", type=parse_pow2, default=32)
    r.add_argument("--probe-snr-db", type=float, default=10.0)
    r.add_argument("--probe-trials", dest="trials", type=int, default=1)
    r.add_argument("--bracket-lists", type=lambda t: [parse_pow2(x) for x in t.split(",")],
                   help="simulate at these list sizes to bracket L'")
    r.add_argument("--min-errors", type=int, default=100)
    r.add_argument("--max-frames", type=int, default=10**6)
    r.add_argument("--threads", type=int, default=1)
    r.add_argument("--seed", type=int, default=0)
    r.set_defaults(func=cmd_recommend)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (InvalidArgument, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":
    sys.exit(main())
