"""AUB against probe list size for several (128,64) codes, written as CSV."""
import argparse
import csv

from polarlist.construct import crc_polar, design, ebch_polar, lwb_preset, select_frozen
from polarlist.crc import koopman_to_poly
from polarlist.galois import ebch_parity_check
from polarlist.spectrum import probe, union_bound


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-log2", type=int, default=14)
    ap.add_argument("--out", default="aub_trajectory.csv")
    args = ap.parse_args()

    rel = design(128, 64, 4.0)
    codes = {
        "polar": select_frozen(rel, 64),
        "crc 0x16": crc_polar(rel, 64, koopman_to_poly("0x16")),
        "crc 0x18": crc_polar(rel, 64, koopman_to_poly("0x18")),
        "ebch 99": ebch_polar(rel, 64, ebch_parity_check(7, 99)),
        "lwb 7": lwb_preset(rel),
    }
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["code", "log2_L", "aub"])
        for name, code in codes.items():
            for m in range(1, args.max_log2 + 1):
                spec = probe(code, 1 << m)
                p = union_bound(spec, 4.0, code.rate).p_ub if spec.entries else 0.0
                w.writerow([name, m, f"{p:.5e}"])
                print(f"{name:<9} log2L={m:2d} aub={p:.5e}")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
