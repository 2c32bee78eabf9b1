"""Symbolic fixtures, written to tests/fixtures/.

trace_polynomials.json  Tr(phi^2), Tr(phi^4) of the sl(4) Higgs field as polynomials
constant_metric.json    closed-form constant solution of the self-duality equations
                        with q2 = 0, derived from 4x4 matrices (not the bracket engine),
                        plus its values at a few sample points
"""
import json
from pathlib import Path

import sympy as sp

OUT = Path(__file__).resolve().parents[1] / "tests" / "fixtures"


def higgs_matrix(mu, nu, q2):
    return sp.Matrix([[0, 0, nu, q2], [0, 0, q2, mu], [0, 1, 0, 0], [1, 0, 0, 0]])


def trace_polynomials() -> dict:
    mu, nu, q2 = sp.symbols("mu nu q2")
    phi = higgs_matrix(mu, nu, q2)
    t2 = sp.expand((phi**2).trace())
    t4 = sp.expand((phi**4).trace())
    return {"variables": ["mu", "nu", "q2"], "tr_phi2": str(t2), "tr_phi4": str(t4)}


def constant_metric() -> dict:
    # positive reals suffice: a diagonal unitary gauge removes the phases of mu, nu
    m, n = sp.symbols("m n", positive=True)
    u1, u2 = sp.symbols("u1 u2", real=True)
    phi = higgs_matrix(m, n, 0)
    h = sp.diag(sp.exp(u1), sp.exp(u2), sp.exp(-u1), sp.exp(-u2))
    star = h.inv() * phi.T * h
    comm = sp.simplify(phi * star - star * phi)
    eqs = [sp.simplify(comm[0, 0]), sp.simplify(comm[1, 1])]
    # each equation is a difference of two exponentials; compare logarithms
    lin = []
    for e in eqs:
        a, b = e.as_ordered_terms()
        lin.append(sp.expand_log(sp.log(a) - sp.log(-b), force=True))
    sol = sp.solve(lin, [u1, u2], dict=True)[0]
    samples = []
    for mv, nv in ((1.0, 0.5), (1.0, 1.0), (2.0, 0.3), (0.7, 1.9)):
        samples.append({"mu": mv, "nu": nv,
                        "u1": float(sol[u1].subs({m: mv, n: nv})),
                        "u2": float(sol[u2].subs({m: mv, n: nv})),
                        "energy_density": float(sp.N(4 * sp.sqrt(mv * nv)))})
    check = [sp.simplify(e.subs(sol)) for e in eqs]
    assert check == [0, 0], check
    density = sp.simplify(sum((phi * star)[i, i] for i in range(4)).subs(sol))
    return {"u1": str(sol[u1]), "u2": str(sol[u2]), "energy_density": str(density),
            "samples": samples}


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    for name, data in (("trace_polynomials", trace_polynomials()), ("constant_metric", constant_metric())):
        (OUT / f"{name}.json").write_text(json.dumps(data, indent=2) + "\n")
        print(name, json.dumps(data, indent=2))
