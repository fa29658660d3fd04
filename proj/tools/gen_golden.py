#!/usr/bin/env python3
"""Generate golden tables for the special-function and circle-eigenvalue tests.

Uses mpmath at 160 working digits. Output records are whitespace-separated with
20 significant digits:

    bessel_j.txt, bessel_y.txt, hankel_h1.txt:  order re(z) im(z) re(f) im(f)
    circle_eigs.txt:  m re(k) im(k) re(S) im(S) re(K) im(K) re(N) im(N)

Run from the repository root:  python3 tools/gen_golden.py data/golden
"""
import sys
from pathlib import Path

import mpmath as mp

mp.mp.dps = 160  # hankel1 is formed as J + iY internally; large Im z needs the headroom


def fmt(x):
    return mp.nstr(x, 20, min_fixed=0, max_fixed=0)


def arguments():
    zs = []
    # real axis
    for e in mp.linspace(-3, 4, 43):
        zs.append(mp.mpc(mp.mpf(10) ** e, 0))
    # complex rays through the envelope, |Im z| <= 64
    for arg in (0.05, 0.2, 0.4636476090008061, 0.7853981633974483, 1.2, 1.5):
        for e in mp.linspace(-2, 4, 31):
            r = mp.mpf(10) ** e
            z = mp.mpc(r * mp.cos(arg), r * mp.sin(arg))
            if abs(z.imag) <= 64:
                zs.append(z)
    # values quoted in the test suite
    for z in (mp.mpc(1, 0), mp.mpc(2, 1), mp.mpc(2, 1) * mp.mpf("0.1"),
              mp.mpc(2, 1) * 5, mp.mpc(2, 0) * mp.sqrt(32)):
        zs.append(z)
    # kernel arguments kappa*r for kappa = k + i
    for k in (1, 2, 4, 8, 32, 128):
        for r in ("1e-8", "1e-4", "0.01", "0.3", "1", "2.5", "5.656854"):
            zs.append(mp.mpc(k, 1) * mp.mpf(r))
    # arguments straddling the series / asymptotic switch
    for r in (11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 22, 25, 30):
        for arg in (0.0, 0.1, 0.3, 0.6):
            zs.append(mp.mpc(r * mp.cos(arg), r * mp.sin(arg)))
    return zs


def write_bessel(outdir):
    zs = arguments()
    files = {
        "bessel_j.txt": mp.besselj,
        "bessel_y.txt": mp.bessely,
        "hankel_h1.txt": mp.hankel1,
    }
    for name, fn in files.items():
        with open(outdir / name, "w") as fh:
            for order in (0, 1):
                for z in zs:
                    f = fn(order, z)
                    fh.write(f"{order} {fmt(z.real)} {fmt(z.imag)} {fmt(f.real)} {fmt(f.imag)}\n")


def circle_eigs(m, k):
    """Unit-circle eigenvalues of S, K (= K^T) and N for e^{imt}."""
    J = mp.besselj(m, k)
    H = mp.hankel1(m, k)
    Jp = mp.besselj(m, k, 1)
    Hp = (mp.hankel1(m - 1, k) - mp.hankel1(m + 1, k)) / 2
    S = 1j * mp.pi / 2 * J * H
    K = 1j * mp.pi * k / 2 * J * Hp + mp.mpf(1) / 2
    N = 1j * mp.pi * k ** 2 / 2 * Jp * Hp
    return S, K, N


def write_circle(outdir):
    with open(outdir / "circle_eigs.txt", "w") as fh:
        for k in (mp.mpc(2, 0), mp.mpc(2, 1)):
            for m in range(0, 11):
                S, K, N = circle_eigs(m, k)
                vals = [k.real, k.imag, S.real, S.imag, K.real, K.imag, N.real, N.imag]
                fh.write(f"{m} " + " ".join(fmt(v) for v in vals) + "\n")


def main():
    outdir = Path(sys.argv[1] if len(sys.argv) > 1 else "data/golden")
    outdir.mkdir(parents=True, exist_ok=True)
    write_bessel(outdir)
    write_circle(outdir)


if __name__ == "__main__":
    main()
