#!/usr/bin/env python3
"""Generate zero files with mpmath, independently of the C++ zero finder.

Usage: make_zero_fixtures.py OUTDIR

Writes zeros_q5_chi{1,2,3}.txt (height 60) and zeros_q4_chi1_ref.txt
(height 60) in the ZEROS v1 format.
"""
import cmath
import sys
from pathlib import Path

import mpmath as mp

mp.mp.dps = 25


def primitive_root(q):
    phi = q - 1  # only prime moduli are needed here
    for g in range(2, q):
        if all(pow(g, phi // p, q) != 1 for p in {p for p in range(2, phi + 1)
                                                 if phi % p == 0 and all(p % d for d in range(2, p))}):
            return g
    raise ValueError(q)


def character_table(q, j):
    """Values of character j mod q (q = 4 or an odd prime) over residues 0..q-1."""
    vals = [mp.mpc(0)] * q
    if q == 4:
        vals[1] = mp.mpc(1)
        vals[3] = mp.mpc((-1) ** j)
        return vals
    g = primitive_root(q)
    n = q - 1
    x = 1
    for k in range(n):
        vals[x] = mp.exp(2j * mp.pi * j * k / n)
        x = x * g % q
    return vals


def hardy_z_factory(q, vals):
    kappa = 0 if abs(vals[q - 1] - 1) < 1e-9 else 1
    gauss = mp.fsum(vals[a] * mp.exp(2j * mp.pi * a / q) for a in range(1, q))
    eps = gauss / ((1j) ** kappa * mp.sqrt(q))
    rot = 1 / mp.sqrt(eps)

    def z(t):
        s = mp.mpf(0.5) + 1j * t
        theta = mp.im(mp.loggamma((s + kappa) / 2)) + t / 2 * mp.log(q / mp.pi)
        v = rot * mp.exp(1j * theta) * mp.dirichlet(s, vals)
        return mp.re(v)

    return z, kappa


def zeros_up_to(z, T, step):
    out = []
    t0, z0 = mp.mpf(step), z(mp.mpf(step))
    n = int(T / step)
    for i in range(2, n + 1):
        t1 = mp.mpf(i) * step
        z1 = z(t1)
        if z0 == 0:
            out.append(t0)
        elif z0 * z1 < 0:
            out.append(mp.findroot(z, (t0, t1), solver="anderson"))
        t0, z0 = t1, z1
    return out


def write(path, q, j, T, gammas):
    with open(path, "w") as f:
        f.write("ZEROS v1\n")
        f.write("# generated by make_zero_fixtures.py with mpmath %s\n" % mp.__version__)
        f.write("q=%d chi=%d height=%s\n" % (q, j, mp.nstr(T, 6)))
        for g in gammas:
            f.write("%s 1\n" % mp.nstr(g, 17))


def main():
    out = Path(sys.argv[1])
    out.mkdir(parents=True, exist_ok=True)
    T = 60
    for q, j, name in [(5, 1, "zeros_q5_chi1.txt"), (5, 2, "zeros_q5_chi2.txt"),
                       (5, 3, "zeros_q5_chi3.txt"), (4, 1, "zeros_q4_chi1_ref.txt")]:
        z, kappa = hardy_z_factory(q, character_table(q, j))
        gammas = zeros_up_to(z, T, mp.mpf("0.02"))
        est = (T / (2 * mp.pi)) * mp.log(q * T / (2 * mp.pi * mp.e))
        print(f"q={q} chi={j} kappa={kappa} zeros={len(gammas)} smooth={float(est):.2f}"
              f" first={mp.nstr(gammas[0], 12) if gammas else None}")
        write(out / name, q, j, T, gammas)


if __name__ == "__main__":
    main()
