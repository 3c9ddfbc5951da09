"""FER against Eb/N0 for eBCH k'=99 and the LWB preset under SCL decoding."""
import argparse

from polarlist.construct import design, ebch_polar, lwb_preset
from polarlist.galois import ebch_parity_check
from polarlist.mcsim import SweepConfig, measure_fer, write_fer_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--snr-db", default="1.0,1.5,2.0,2.5,3.0")
    ap.add_argument("--list", type=int, default=32)
    ap.add_argument("--min-errors", type=int, default=100)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rel = design(128, 64, 4.0)
    codes = {"ebch99": ebch_polar(rel, 64, ebch_parity_check(7, 99)), "lwb7": lwb_preset(rel)}
    snrs = [float(s) for s in args.snr_db.split(",")]
    for name, code in codes.items():
        cfg = SweepConfig(snrs, L=args.list, min_errors=args.min_errors, seed=args.seed, decoder="scl")
        pts = measure_fer(code, cfg, threads=args.threads)
        write_fer_csv(f"fer_{name}.csv", pts)
        for p in pts:
            print(f"{name:<7} {p.snr_db:4.1f} dB frames={p.frames:<8d} errors={p.frame_errors:<4d} fer={p.fer:.4e}")


if __name__ == "__main__":
    main()
