"""Exploratory scan of the period-cell energy along q2 = t (constant), full-metric mode.

Only the shape of the curve is meaningful; the normalization is the trace form.
usage: python scripts/energy_scan.py [n] [tmax] [steps]
"""
import sys

import numpy as np

from sp4cyclic.harmonic import energy, hopf
from sp4cyclic.higgs import HiggsData
from sp4cyclic.solver import TorusDomain, solve


def scan(n=16, tmax=0.4, steps=5, mu=1.0, nu=0.5):
    dom = TorusDomain(n=n)
    out = []
    for t in np.linspace(0.0, tmax, steps):
        h = HiggsData(mu, nu, t)
        m, rep = solve(h, dom, "full")
        e = energy(h, m, dom) if rep.converged else np.nan
        out.append((t, rep.converged, e, float(np.max(np.abs(hopf(h)))), rep.offdiag_sup))
    return out


if __name__ == "__main__":
    args = [float(a) for a in sys.argv[1:]]
    n = int(args[0]) if args else 16
    tmax = args[1] if len(args) > 1 else 0.4
    steps = int(args[2]) if len(args) > 2 else 5
    print("q2,converged,energy,hopf_sup,offdiag_sup")
    for r in scan(n, tmax, steps):
        print(f"{r[0]:.4f},{r[1]},{r[2]:.12e},{r[3]:.6f},{r[4]:.3e}")
