"""SC-FER estimate and converged union bound for the (128,64) reference codes at 4 dB."""
import argparse

from polarlist.construct import design, ebch_polar, estimate_sc_fer, rm_polar, select_frozen
from polarlist.galois import ebch_parity_check
from polarlist.spectrum import converge

REFERENCE = {  # name: (SC-FER estimate, AUB)
    "polar": (0.0021507, 1.1541e-3),
    "RM-polar d=16": (0.022155, None),
    "eBCH k'=99": (0.0067334, 1.0086e-5),
    "eBCH k'=85": (0.0085444, 5.3637e-6),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--snr-db", type=float, default=4.0)
    ap.add_argument("--lmax", type=int, default=1 << 14)
    ap.add_argument("--trials", type=int, default=1)
    args = ap.parse_args()

    rel = design(128, 64, args.snr_db)
    codes = {"polar": select_frozen(rel, 64), "RM-polar d=16": rm_polar(rel, 64, 16)}
    for kp in (106, 99, 92, 85, 78):
        codes[f"eBCH k'={kp}"] = ebch_polar(rel, 64, ebch_parity_check(7, kp))

    print(f"{'code':<16} {'SC-FER est':>11} {'d_min':>5} {'A_min':>6} {'AUB':>11}  conv  reference")
    for name, code in codes.items():
        sc = estimate_sc_fer(code, args.snr_db)
        spec, hist = converge(code, 32, args.lmax, args.snr_db, trials=args.trials)
        d = min(spec.entries) if spec.entries else 0
        pub = REFERENCE.get(name, "")
        print(f"{name:<16} {sc:11.5g} {d:5d} {spec.entries.get(d, 0):6d} {hist[-1][1]:11.5e}  "
              f"{'yes' if spec.converged else 'no ':<4}  {pub}")


if __name__ == "__main__":
    main()
