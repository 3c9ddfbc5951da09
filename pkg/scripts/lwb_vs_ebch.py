"""LWB preset with 7 dynamic bits against the eBCH k'=99 code at 4 dB."""
import argparse

from polarlist.construct import design, ebch_polar, estimate_sc_fer, lwb_preset
from polarlist.construct.recommend import compare
from polarlist.galois import ebch_parity_check
from polarlist.spectrum import converge


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lmax", type=int, default=1 << 14)
    ap.add_argument("--trials", type=int, default=16)
    args = ap.parse_args()

    rel = design(128, 64, 4.0)
    codes = {"lwb N_df=7": lwb_preset(rel), "eBCH k'=99": ebch_polar(rel, 64, ebch_parity_check(7, 99))}
    spectra = []
    for name, code in codes.items():
        spec, hist = converge(code, 32, args.lmax, 4.0, trials=args.trials)
        spectra.append(spec)
        d = min(spec.entries)
        print(f"{name:<12} sc_fer={estimate_sc_fer(code, 4.0):.6g} d_min={d} A={spec.entries[d]} "
              f"aub={hist[-1][1]:.4e} converged={spec.converged}")
    print(compare(*codes.values(), 4.0, spectra).report(*codes))


if __name__ == "__main__":
    main()
