"""Command-line entry point.

    sp4cyclic algebra check|dump
    sp4cyclic higgs invariants --mu 1 --nu 0.5
    sp4cyclic solve --mu 1 --nu 0.5 --n 64 [--full]
    sp4cyclic hopf|energy|holonomy  (same flags as solve)
    sp4cyclic rigidity --frame 1,1,0.7 --zeroed a2
    sp4cyclic moduli --genus 2 [--degree 2]

Settings can also come from an INI file (--config); command-line flags win.  Exit codes:
0 success, 2 non-convergence or a failed check, 1 usage error.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import io
import os
import re
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import cyclic, harmonic, higgs, liealg, moduli, solver

OUTPUT_DIR_ENV = "SP4CYCLIC_OUTPUT_DIR"
DEFAULT_SEED = 20240607
EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


# config section -> keys (each key is also a RunConfig field)
SECTIONS = {
    "higgs": ("mu", "nu", "q2", "genus", "degree"),
    "grid": ("n", "tau", "area"),
    "solver": ("full", "tol", "maxit", "init", "seed"),
    "rigidity": ("frame", "zeroed", "strict"),
    "output": ("format", "output", "dump_fields"),
}


@dataclass
class RunConfig:
    command: str = ""
    action: str = ""
    mu: str = "1"
    nu: str = "0"
    q2: str = "0"
    genus: int = 2
    degree: int | None = None
    n: int = 64
    tau: complex = 1j
    area: float = 1.0
    full: bool = False
    tol: float = 1e-10
    maxit: int = 50
    init: str = "flat"
    seed: int = DEFAULT_SEED
    frame: str | None = None  # default: (1, mu, nu)
    zeroed: str = "a2"
    strict: bool = True
    format: str | None = None  # None: csv for moduli, text otherwise
    output: str | None = None
    dump_fields: str | None = None

    def validate(self) -> None:
        if self.tol <= 0:
            raise UsageError("tol must be positive")
        if self.n < 8 or self.n % 2:
            raise UsageError("n must be even and at least 8")
        if self.maxit < 1:
            raise UsageError("maxit must be at least 1")
        if self.format is None:
            self.format = "csv" if self.command == "moduli" else "text"
        if self.format not in ("text", "csv"):
            raise UsageError("format must be text or csv")
        if self.init not in ("flat", "random"):
            raise UsageError("init must be flat or random")
        if self.zeroed not in ("a1", "a2"):
            raise UsageError("zeroed must be a1 or a2")


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _convert(key: str, raw: str):
    kind = _FIELD_TYPES[key]
    try:
        if kind == "int" or kind == "int | None":
            return int(raw)
        if kind == "float":
            return float(raw)
        if kind == "complex":
            return parse_tau(raw)
        if kind == "bool":
            low = raw.strip().lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
    except ValueError as exc:
        raise UsageError(f"bad value for {key}: {raw!r}") from exc
    return raw.strip()


def _line_of(text: str, section: str, key: str | None = None) -> int:
    cur = None
    for i, line in enumerate(text.splitlines(), start=1):
        m = re.match(r"\s*\[([^\]]+)\]", line)
        if m:
            cur = m.group(1).strip()
            if key is None and cur == section:
                return i
        elif key is not None and cur == section and re.match(rf"\s*{re.escape(key)}\s*[=:]", line, re.IGNORECASE):
            return i
    return 0


def load_config(path: str) -> dict:
    """Strictly parse an INI file into RunConfig overrides."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text, source=path)
    except configparser.Error as exc:
        raise UsageError(f"{path}: {exc}") from exc
    out = {}
    for sec in cp.sections():
        if sec not in SECTIONS:
            raise UsageError(f"{path}:{_line_of(text, sec)}: unknown section [{sec}]")
        for key, raw in cp.items(sec):
            if key not in SECTIONS[sec]:
                raise UsageError(f"{path}:{_line_of(text, sec, key)}: unknown key {key!r} in [{sec}]")
            try:
                out[key] = _convert(key, raw)
            except UsageError as exc:
                raise UsageError(f"{path}:{_line_of(text, sec, key)}: {exc}") from exc
    return out


# ---------------------------------------------------------------- formatting

def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if isinstance(v, (complex, np.complexfloating)):
        z = complex(v)
        if z.imag == 0:
            return format(z.real, ".17g")
        return f"{z.real:.17g}{z.imag:+.17g}j"
    return str(v)


def render(records: list, kind: str) -> str:
    """records: list of dicts.  text gives blank-line separated key: value blocks."""
    if kind == "csv":
        buf = io.StringIO()
        keys = list(dict.fromkeys(k for r in records for k in r))
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(keys)
        for r in records:
            w.writerow([fmt(r[k]) if k in r else "" for k in keys])
        return buf.getvalue()
    return "\n".join("".join(f"{k}: {fmt(v)}\n" for k, v in r.items()) for r in records)


def output_path(name: str) -> Path:
    path = Path(name)
    outdir = os.environ.get(OUTPUT_DIR_ENV)
    if outdir:
        path = Path(outdir) / path.name
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def emit(text: str, cfg: RunConfig) -> None:
    if cfg.output is None:
        sys.stdout.write(text)
    else:
        output_path(cfg.output).write_text(text)


# ---------------------------------------------------------------- data

def parse_tau(raw: str) -> complex:
    """'re,im' or a Python complex literal such as 0.3+1.1j."""
    raw = raw.replace(" ", "")
    if "," in raw:
        re_, im = raw.split(",", 1)
        return complex(float(re_), float(im))
    return complex(raw)


def parse_field(spec: str, dom: solver.TorusDomain):
    """A constant like '0.5+0.1j' or a preset 'wave:a,b' = a + b cos(2 pi s)."""
    spec = spec.strip()
    if spec.startswith("wave:"):
        try:
            a, b = (complex(p) for p in spec[5:].split(","))
        except ValueError as exc:
            raise UsageError(f"bad preset {spec!r}; expected wave:a,b") from exc
        s, _ = dom.st()
        return a + b * np.cos(2 * np.pi * s)
    try:
        return complex(spec.replace(" ", ""))
    except ValueError as exc:
        raise UsageError(f"bad field value {spec!r}") from exc


def build_inputs(cfg: RunConfig) -> tuple:
    try:
        dom = solver.TorusDomain(cfg.tau, cfg.n, cfg.area)
        d = cfg.degree if cfg.degree is not None else 2 * cfg.genus - 2
        h = higgs.HiggsData(parse_field(cfg.mu, dom), parse_field(cfg.nu, dom),
                            parse_field(cfg.q2, dom), cfg.genus, d)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return h, dom


def run_solve(cfg: RunConfig) -> tuple:
    h, dom = build_inputs(cfg)
    mode = "full" if cfg.full else "diagonal"
    init = None if cfg.init == "flat" else "random"
    try:
        m, rep = solver.solve(h, dom, mode, init, tol=cfg.tol, maxit=cfg.maxit, seed=cfg.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if cfg.dump_fields:
        dump_fields(m, dom, output_path(cfg.dump_fields))
    return h, dom, m, rep


def dump_fields(m: solver.MetricField, dom: solver.TorusDomain, path: Path) -> None:
    z = dom.z()
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if m.mode == "diagonal":
            w.writerow(["i", "j", "x", "y", "u1", "u2"])
        else:
            w.writerow(["i", "j", "x", "y", "H11", "H22", "H12_re", "H12_im"])
        for i in range(dom.n):
            for j in range(dom.n):
                row = [i, j, z[i, j].real, z[i, j].imag]
                if m.mode == "diagonal":
                    row += [m.u1[i, j], m.u2[i, j]]
                else:
                    H = m.H[i, j]
                    row += [H[0, 0].real, H[1, 1].real, H[0, 1].real, H[0, 1].imag]
                w.writerow([fmt(v) for v in row])


def _report_record(rep: solver.SolveReport) -> dict:
    return {"converged": rep.converged, "mode": rep.mode, "iterations": rep.iterations,
            "residual_sup": rep.residual_sup, "residual_l2": rep.residual_l2,
            "offdiag_sup": rep.offdiag_sup, "message": rep.message}


# ---------------------------------------------------------------- commands

def cmd_algebra(cfg: RunConfig) -> tuple:
    if cfg.action == "dump":
        return liealg.dump_table(), EXIT_OK
    defects = liealg.invariant_suite()
    recs = [{"check": k, "defect": v, "passed": v <= 1e-12} for k, v in defects.items()]
    ok = all(r["passed"] for r in recs)
    return render(recs, cfg.format), EXIT_OK if ok else EXIT_FAIL


def cmd_higgs(cfg: RunConfig) -> tuple:
    h, dom = build_inputs(cfg)
    tr2, tr4 = higgs.hitchin_invariants(higgs.build_sl4(h))
    flag = higgs.stability_flag(h)
    rec = {"genus": h.genus, "degree": h.d, "stability": flag.flag}
    if flag.note:
        rec["stability_note"] = flag.note
    if np.ndim(tr2):
        rec.update({"tr_phi2_sup": float(np.max(np.abs(tr2))), "tr_phi4_sup": float(np.max(np.abs(tr4)))})
    else:
        rec.update({"tr_phi2": complex(tr2), "tr_phi4": complex(tr4)})
    if np.max(np.abs(h.fields()[2])) == 0:
        rec["zeta4_fixed_point"] = higgs.zeta4_fixed_point_check(h)
    if not np.ndim(tr2):
        nf, lam = higgs.normal_form(h)
        rec.update({"normal_form_lambda": lam, "normal_form_mu": complex(nf.mu),
                    "normal_form_nu": complex(nf.nu), "normal_form_q2": complex(nf.q2)})
    return render([rec], cfg.format), EXIT_OK


def cmd_solve(cfg: RunConfig) -> tuple:
    h, dom, m, rep = run_solve(cfg)
    rec = _report_record(rep)
    mu, nu, q2 = h.fields()
    if rep.converged and mu.ndim == 0 and q2 == 0 and m.mode == "diagonal":
        u1, u2 = solver.constant_oracle(complex(mu), complex(nu))
        rec["oracle_error"] = float(max(np.max(np.abs(m.u1 - u1)), np.max(np.abs(m.u2 - u2))))
    return render([rec], cfg.format), EXIT_OK if rep.converged else EXIT_FAIL


def cmd_hopf(cfg: RunConfig) -> tuple:
    h, dom = build_inputs(cfg)
    q = harmonic.hopf(h)
    rec = {"hopf_sup": float(np.max(np.abs(q))),
           "hopf_minus_4q2_sup": float(np.max(np.abs(q - 4 * h.fields()[2])))}
    if np.ndim(q) == 0:
        rec["hopf"] = complex(q)
    rec["branched_minimal"] = rec["hopf_sup"] == 0.0
    return render([rec], cfg.format), EXIT_OK


def cmd_energy(cfg: RunConfig) -> tuple:
    h, dom, m, rep = run_solve(cfg)
    rec = _report_record(rep)
    if rep.converged:
        rec["energy"] = harmonic.energy(h, m, dom)
    return render([rec], cfg.format), EXIT_OK if rep.converged else EXIT_FAIL


def cmd_holonomy(cfg: RunConfig) -> tuple:
    h, dom, m, rep = run_solve(cfg)
    if not rep.converged:
        return render([_report_record(rep)], cfg.format), EXIT_FAIL
    res = harmonic.holonomy(h, m, dom, rep)
    rec = {"commutator_defect": res.commutator_defect, "symplectic_defect": res.symplectic_defect,
           "det_defect": res.det_defect, "reality_defect": res.reality_defect,
           "plaquette_defect": res.plaquette_defect, "holomorphic": res.holomorphic}
    for name, M in (("Ma", res.Ma), ("Mb", res.Mb)):
        for i in range(4):
            for j in range(4):
                rec[f"{name}_{i + 1}{j + 1}"] = complex(M[i, j])
    return render([rec], cfg.format), EXIT_OK


def cmd_rigidity(cfg: RunConfig) -> tuple:
    spec = cfg.frame if cfg.frame is not None else f"1,{cfg.mu},{cfg.nu}"
    try:
        vals = [complex(p.replace(" ", "")) for p in spec.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad frame {spec!r}") from exc
    if len(vals) != 3:
        raise UsageError("frame needs three values: phi_-a1, phi_-a2, phi_mu")
    frame = cyclic.CyclicFrame.from_values(*vals)
    zeroed = {"a1": -liealg.ALPHA1, "a2": -liealg.ALPHA2}[cfg.zeroed]
    try:
        res = cyclic.rigidity_nullspace(frame, zeroed, strict=cfg.strict)
    except cyclic.RigidityHypothesisError as exc:
        raise UsageError(f"{exc} (pass --no-strict to run anyway)") from exc
    recs = [{"zeroed": zeroed.name, "dimension": res.dimension,
             "smallest_singular_value": float(res.singular_values.min())}]
    for k, w in enumerate(res.basis):
        rec = {"basis_vector": k}
        rec.update({str(lab): complex(v) for lab, v in w.dz.as_dict(1e-13).items()})
        recs.append(rec)
    return render(recs, cfg.format), EXIT_OK


def cmd_moduli(cfg: RunConfig) -> tuple:
    g = cfg.genus
    try:
        rows = [dict(moduli.census_rows(g))]
        degrees = [cfg.degree] if cfg.degree is not None else range(g - 1, 3 * g - 2)
        table = []
        for d in degrees:
            a, b = moduli.rr_dims(g, d)
            r = {"genus": g, "degree": d, "a": a, "b": b}
            if a != moduli.N_DEPENDENT:
                fm = moduli.fiber_model(a, b)
                r.update({"fiber": fm.description, "fiber_dim": fm.dimension})
            if g - 1 < d <= 2 * g - 2:
                r["dimension_check"] = moduli.dimension_check(g, d)
            table.append(r)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return render(rows, cfg.format) + "\n" + render(table, cfg.format), EXIT_OK


COMMANDS = {
    "algebra": cmd_algebra, "higgs": cmd_higgs, "solve": cmd_solve, "hopf": cmd_hopf,
    "energy": cmd_energy, "holonomy": cmd_holonomy, "rigidity": cmd_rigidity, "moduli": cmd_moduli,
}


# ---------------------------------------------------------------- argument parsing

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config")
    p.add_argument("--format", choices=("text", "csv"))
    p.add_argument("--output", help=f"output file; its directory is replaced by ${OUTPUT_DIR_ENV} if set")


def _add_solve_flags(p: argparse.ArgumentParser) -> None:
    for k in ("mu", "nu", "q2"):
        p.add_argument(f"--{k}", help="constant (e.g. 0.5+0.1j) or preset wave:a,b")
    p.add_argument("--genus", type=int)
    p.add_argument("--degree", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--tau", type=parse_tau, help="re,im or a complex literal")
    p.add_argument("--area", type=float)
    p.add_argument("--full", action="store_const", const=True)
    p.add_argument("--tol", type=float)
    p.add_argument("--maxit", type=int)
    p.add_argument("--init", choices=("flat", "random"))
    p.add_argument("--seed", type=int)
    p.add_argument("--dump-fields", help="CSV of the solved metric per node")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sp4cyclic", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("algebra")
    p.add_argument("action", choices=("check", "dump"))
    _add_common(p)
    p = sub.add_parser("higgs")
    p.add_argument("action", choices=("invariants",))
    _add_common(p)
    _add_solve_flags(p)
    for name in ("solve", "hopf", "energy", "holonomy"):
        p = sub.add_parser(name)
        _add_common(p)
        _add_solve_flags(p)
    p = sub.add_parser("rigidity")
    _add_common(p)
    p.add_argument("--frame", help="phi_-a1,phi_-a2,phi_mu (default 1,mu,nu)")
    p.add_argument("--mu")
    p.add_argument("--nu")
    p.add_argument("--zeroed", "--zero-root", dest="zeroed", choices=("a1", "a2"))
    p.add_argument("--no-strict", dest="strict", action="store_const", const=False)
    p = sub.add_parser("moduli")
    _add_common(p)
    p.add_argument("--genus", type=int)
    p.add_argument("--degree", type=int)
    return ap


def make_config(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=ns.command, action=getattr(ns, "action", "") or "")
    if ns.config:
        for k, v in load_config(ns.config).items():
            setattr(cfg, k, v)
    for k, v in vars(ns).items():
        if k in _FIELD_TYPES and k not in ("command", "action") and v is not None:
            setattr(cfg, k, v)
    cfg.validate()
    return cfg


def run(cfg: RunConfig) -> int:
    text, code = COMMANDS[cfg.command](cfg)
    emit(text, cfg)
    return code


def main(argv: list | None = None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return run(make_config(ns))
    except UsageError as exc:
        print(f"sp4cyclic: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
