"""Command-line entry point: ``heightlab <command> [options]``.

Exit status: 0 on success, 2 on invalid input, 3 when a certified bound check
fails (which indicates a bug in this package, not a counterexample).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import __version__
from . import linalg as la
from .flags import flag_table
from .hermlat import arakelov_degree, lattice_from_json
from .heights import (
    DegenerateInput,
    NoSemistableComponent,
    NotDestabilizing,
    NotSemistable,
    adjoint_drift_certificate,
    drift_sequence,
    point_height,
    rep_constant,
    theorem1_check,
    theorem2_floor,
)
from .loglin import LogValue, lv_to_float
from .reps import (
    Adjoint,
    CompactifiedRep,
    crep_from_json,
    crep_to_json,
    decompose_homogeneous,
    det_twist_check,
    homogeneity_degrees,
    induced_gram,
    rep_dimension,
    rep_weights,
)
from .semistab import (
    InvariantGeneratorSet,
    OnePS,
    PointInP,
    adjoint_invariants,
    adjoint_semistable,
    hm_weight,
    instability_search,
    invariant_certificate,
    torus_semistable,
)

COMMANDS = ("degree", "height", "rep-info", "semistable", "check-bound", "drift", "flag-constants", "theorem1-suite", "drift-suite")
EXIT_OK, EXIT_INVALID, EXIT_VIOLATION = 0, 2, 3
TEXT_DEFAULT = {"degree": "text", "height": "text"}


class InputError(ValueError):
    def __init__(self, where: str, msg: str):
        super().__init__(f"{where}: {msg}")
        self.where = where


@dataclass
class RunConfig:
    command: str
    lattice: str | None = None
    rep: str | None = None
    point: str | None = None
    gens: str | None = None
    translate: str | None = None
    lam: str | None = None
    base: int = 2
    steps: int = 15
    count: int = 50
    seed: int = 0
    digits: int = 17
    format: str | None = None
    out: str | None = None
    n: int | None = None
    budget: int = 200
    workers: int = 1
    extra: dict = field(default_factory=dict)

    def header(self) -> dict:
        d = {k: v for k, v in self.__dict__.items() if k not in ("extra", "out")}
        d["version"] = __version__
        return d


# -- input loading ------------------------------------------------------------


def _load(path: str | None, flag: str) -> dict:
    if path is None:
        raise InputError(flag, "required")
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(flag, str(exc)) from exc
    if not isinstance(obj, dict):
        raise InputError(flag, "top level must be a JSON object")
    if obj.get("schema") != 1:
        raise InputError(f"{flag}.schema", f"expected 1, got {obj.get('schema')!r}")
    return obj


def _guard(flag: str, fn, *args):
    try:
        return fn(*args)
    except InputError:
        raise
    except (ValueError, KeyError, TypeError, IndexError, ZeroDivisionError) as exc:
        raise InputError(flag, f"{type(exc).__name__}: {exc}") from exc


def load_lattice(cfg: RunConfig):
    return _guard("--lattice", lattice_from_json, _load(cfg.lattice, "--lattice"))


def load_rep(cfg: RunConfig) -> CompactifiedRep:
    return _guard("--rep", crep_from_json, _load(cfg.rep, "--rep"))


def load_point(cfg: RunConfig, crep: CompactifiedRep) -> PointInP:
    obj = _load(cfg.point, "--point")

    def build():
        if "covector" in obj:
            return PointInP(crep.tree, tuple(int(Fraction(c)) for c in obj["covector"]))
        if "matrix" in obj:
            if not isinstance(crep.tree, Adjoint):
                raise ValueError("'matrix' points are only accepted for adjoint representations")
            return PointInP.from_adjoint_matrix([[Fraction(c) for c in row] for row in obj["matrix"]])
        raise KeyError("point needs 'covector' or 'matrix'")

    return _guard("--point", build)


def load_gens(cfg: RunConfig, crep: CompactifiedRep):
    if cfg.gens is None:
        if isinstance(crep.tree, Adjoint):
            return adjoint_invariants(crep.tree.n)
        return None
    obj = _load(cfg.gens, "--gens")
    if "components" in obj:
        return _guard(
            "--gens.components",
            lambda: {int(k): InvariantGeneratorSet.from_json(v) for k, v in obj["components"].items()},
        )
    return _guard("--gens", InvariantGeneratorSet.from_json, obj)


def parse_lambda(s: str | None) -> OnePS | None:
    if s is None:
        return None
    return _guard("--lambda", lambda: OnePS(tuple(int(x) for x in s.split(","))))


# -- formatting ---------------------------------------------------------------


def lv_json(v: LogValue, digits: int) -> dict:
    return {"exact": str(v), "float": float(lv_to_float(v, digits))}


def frac_json(x: Fraction) -> dict:
    x = Fraction(x)
    return {"exact": f"{x.numerator}/{x.denominator}", "float": float(x)}


def _color(text: str, code: str) -> str:
    if os.environ.get("HEIGHTLAB_NO_COLOR") or not sys.stderr.isatty():
        return text
    return f"\033[{code}m{text}\033[0m"


# -- commands -----------------------------------------------------------------


def cmd_degree(cfg: RunConfig) -> tuple[dict, int]:
    lat = load_lattice(cfg)
    deg = arakelov_degree(lat)
    text = f"deg = {deg} ({float(lv_to_float(deg, cfg.digits))!r})"
    return {"degree": lv_json(deg, cfg.digits), "rank": lat.rank, "text": text}, EXIT_OK


def cmd_height(cfg: RunConfig) -> tuple[dict, int]:
    lat = load_lattice(cfg)
    crep = load_rep(cfg)
    p = load_point(cfg, crep)
    h = _guard("--point", point_height, lat, crep, p)
    return {"height": lv_json(h, cfg.digits), "covector": list(p.covector), "text": f"h = {h} ({float(lv_to_float(h, cfg.digits))!r})"}, EXIT_OK


def cmd_rep_info(cfg: RunConfig) -> tuple[dict, int]:
    crep = load_rep(cfg)
    ws = rep_weights(crep.tree)
    out: dict[str, Any] = {
        "rep": crep_to_json(crep),
        "dimension": rep_dimension(crep.tree),
        "degrees": sorted(homogeneity_degrees(crep.tree)),
        "basis": [{"label": l, "weight": list(w)} for l, w in zip(ws.labels, ws.weights)],
    }
    if cfg.lattice:
        lat = load_lattice(cfg)
        g = induced_gram(crep, lat)
        out["induced_gram"] = [[f"{x.numerator}/{x.denominator}" for x in row] for row in g.gram]
        out["induced_degree"] = lv_json(arakelov_degree(g), cfg.digits)
        out["components"] = [
            {"degree": c.degree, "indices": list(c.indices)} for c in decompose_homogeneous(crep, lat)
        ]
        if len(out["degrees"]) == 1:
            try:
                r = det_twist_check(crep, lat)
                out["det_twist"] = {
                    "exponent": r.exponent,
                    "ordering": str(r.ordering),
                    "discrepancy": lv_json(r.discrepancy, cfg.digits),
                    "normalization": lv_json(r.normalization, cfg.digits),
                    "status": str(r.status),
                }
            except ValueError as exc:
                out["det_twist"] = {"error": str(exc)}
    out["text"] = f"dim W = {out['dimension']}, degrees {out['degrees']}"
    return out, EXIT_OK


def cmd_semistable(cfg: RunConfig) -> tuple[dict, int]:
    crep = load_rep(cfg)
    p = load_point(cfg, crep)
    torus = torus_semistable(p)
    out: dict[str, Any] = {
        "covector": list(p.covector),
        "torus": {
            "semistable": torus.semistable,
            "combination": None
            if torus.combination is None
            else [{"weight": list(w), "coef": frac_json(c)} for w, c in sorted(torus.combination.items())],
            "lambda": None if torus.lam is None else list(torus.lam.r),
        },
    }
    lam = parse_lambda(cfg.lam)
    if lam is not None:
        out["hm_weight"] = hm_weight(p, lam)
    verdict = "inconclusive"
    if isinstance(crep.tree, Adjoint):
        ss = adjoint_semistable(p.adjoint_matrix(), cross_check=True)
        out["adjoint_semistable"] = ss
        verdict = "semistable" if ss else "unstable"
    gens = load_gens(cfg, crep)
    if isinstance(gens, InvariantGeneratorSet):
        hit = _guard("--gens", invariant_certificate, p, gens)
        out["invariant"] = None if hit is None else {"generator": hit[0], "value": frac_json(hit[1])}
        if hit is not None:
            verdict = "semistable"
    cert = instability_search(p, cfg.budget, cfg.seed)
    if cert is not None:
        verdict = "unstable"
        out["certificate"] = {
            "g": [[f"{x.numerator}/{x.denominator}" for x in row] for row in cert.g],
            "lambda": list(cert.lam.r),
            "translated": list(cert.translated),
        }
    out["verdict"] = verdict
    out["text"] = f"verdict: {verdict}"
    return out, EXIT_OK


def cmd_check_bound(cfg: RunConfig) -> tuple[dict, int]:
    lat = load_lattice(cfg)
    crep = load_rep(cfg)
    p = load_point(cfg, crep)
    gens = load_gens(cfg, crep)
    degrees = homogeneity_degrees(crep.tree)
    try:
        if len(degrees) == 1:
            if isinstance(gens, dict):
                gens = gens.get(next(iter(degrees)))
            if gens is None:
                raise NotSemistable("no invariant generators supplied; without them no point is certified semistable")
            const = rep_constant(crep, gens, samples=200, seed=cfg.seed)
            report = theorem1_check(lat, crep, p, gens, const, seed=cfg.seed)
            out = report.to_json(cfg.digits)
            out["constant"] = {
                "certified": lv_json(const.c_cert, cfg.digits),
                "sampled_estimate_float": const.c_estimate_float,
                "lambda_min_lower": frac_json(const.lambda_lower),
            }
            satisfied = report.satisfied
        else:
            if not isinstance(gens, dict):
                raise InputError("--gens", "non-homogeneous representations need {'components': {degree: gens}}")
            r2 = theorem2_floor(lat, crep, p, gens, seed=cfg.seed)
            out = r2.bound.to_json(cfg.digits)
            out["case"] = r2.case
            out["component_degree"] = r2.component_degree
            out["projection_height"] = lv_json(r2.projection_height, cfg.digits)
            out["projection_le_height"] = r2.projection_le_height
            out["component_bound"] = r2.component_bound.to_json(cfg.digits)
            satisfied = r2.bound.satisfied and r2.projection_le_height and r2.component_bound.satisfied
    except (NotSemistable, NoSemistableComponent, DegenerateInput) as exc:
        raise InputError("--point", str(exc)) from exc
    out["text"] = f"satisfied = {satisfied}"
    return out, EXIT_OK if satisfied else EXIT_VIOLATION


def cmd_drift(cfg: RunConfig) -> tuple[dict, int]:
    lat = load_lattice(cfg)
    crep = load_rep(cfg)
    p = load_point(cfg, crep)
    lam = parse_lambda(cfg.lam)
    g = None
    if cfg.translate:
        obj = _load(cfg.translate, "--translate")
        g = _guard("--translate", lambda: la.mat([[Fraction(x) for x in row] for row in obj["g"]]))
    if lam is None:
        if not isinstance(crep.tree, Adjoint):
            raise InputError("--lambda", "required for non-adjoint representations")
        try:
            cert = adjoint_drift_certificate(p)
        except NotDestabilizing as exc:
            raise InputError("--point", str(exc)) from exc
        lam, g = cert.lam, cert.matrix()
    try:
        rep = drift_sequence(p, lam, cfg.base, cfg.steps, lat, crep, g=g)
    except NotDestabilizing as exc:
        raise InputError("--lambda", str(exc)) from exc
    out = {
        "lambda": list(lam.r),
        "translate": None if g is None else [[f"{x.numerator}/{x.denominator}" for x in row] for row in g],
        "rows": rep.to_csv_rows(cfg.digits),
        "asymptotic_step": lv_json(rep.asymptotic_step, cfg.digits),
        "decreasing_from": rep.decreasing_from,
        "constant_step_from": rep.constant_step_from,
        "degree_constant": rep.degree_constant,
    }
    out["text"] = f"step {rep.asymptotic_step} from n = {rep.constant_step_from}"
    return out, EXIT_OK


def cmd_flag_constants(cfg: RunConfig) -> tuple[dict, int]:
    if cfg.n is None or cfg.n < 2:
        raise InputError("--N", "an integer >= 2 is required")
    rows = []
    for r in flag_table(cfg.n):
        rows.append(
            {
                "N": cfg.n,
                "partition": list(r.partition.parts),
                "d": r.d,
                "delta": r.delta,
                "A": frac_json(r.a),
                "delta_printed_formula": None if r.delta_printed is None else frac_json(r.delta_printed),
                "A_printed_formula": frac_json(r.a_printed),
            }
        )
    return {
        "kind": "bound constants, not heights",
        "B": "not computed: needs the compactification constant of the Chow embedding",
        "rows": rows,
        "text": "bound constants, not heights",
    }, EXIT_OK


def cmd_theorem1_suite(cfg: RunConfig) -> tuple[dict, int]:
    from .experiments import summarize_theorem1, theorem1_suite

    recs = theorem1_suite(cfg.count, cfg.seed, workers=cfg.workers)
    summary = summarize_theorem1(recs)
    rows = [["index", "N", "satisfied", "height_exact", "degree_exact", "margin"]]
    rows += [[str(r.index), str(r.n), str(r.satisfied), str(r.height), str(r.degree), repr(r.margin)] for r in recs]
    out = {"summary": summary, "rows": rows, "text": f"{summary['count']} instances, {len(summary['failures'])} failures"}
    return out, EXIT_OK if not summary["failures"] else EXIT_VIOLATION


def cmd_drift_suite(cfg: RunConfig) -> tuple[dict, int]:
    from .experiments import drift_suite, summarize_drift

    recs = drift_suite(cfg.count, cfg.seed, steps=cfg.steps, base=cfg.base, workers=cfg.workers)
    summary = summarize_drift(recs)
    rows = [["index", "N", "degree_constant", "decreasing_from", "constant_step_from", "step_exact", "final_height_exact"]]
    rows += [
        [str(r.index), str(r.n), str(r.degree_constant), str(r.decreasing_from), str(r.constant_step_from), str(r.step), str(r.final_height)]
        for r in recs
    ]
    out = {"summary": summary, "rows": rows, "text": f"{summary['count']} points, {len(summary['failures'])} failures"}
    return out, EXIT_OK if not summary["failures"] else EXIT_VIOLATION


HANDLERS = {
    "degree": cmd_degree,
    "height": cmd_height,
    "rep-info": cmd_rep_info,
    "semistable": cmd_semistable,
    "check-bound": cmd_check_bound,
    "drift": cmd_drift,
    "flag-constants": cmd_flag_constants,
    "theorem1-suite": cmd_theorem1_suite,
    "drift-suite": cmd_drift_suite,
}


def _render(cfg: RunConfig, body: dict) -> str:
    if cfg.format == "json":
        payload = {"config": cfg.header(), **{k: v for k, v in body.items() if k != "text"}}
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        rows = body.get("rows")
        if rows and isinstance(rows[0], dict):
            keys = list(rows[0])
            w.writerow(keys)
            for r in rows:
                w.writerow([json.dumps(r[k]) if isinstance(r[k], (list, dict)) else r[k] for k in keys])
        elif rows:
            w.writerows(rows)
        else:
            flat = {k: v for k, v in body.items() if k != "text"}
            w.writerow(list(flat))
            w.writerow([json.dumps(v) if isinstance(v, (list, dict)) else v for v in flat.values()])
        return buf.getvalue()
    lines = [f"# {k}={v}" for k, v in cfg.header().items()]
    lines.append(body.get("text", ""))
    rows = body.get("rows")
    if rows and isinstance(rows[0], dict):
        for r in rows:
            lines.append(
                f"N={r['N']:<3} n={str(tuple(r['partition'])):<16} d={r['d']:<4} δ={r['delta']:<6} A={r['A']['exact']}"
            )
    elif rows:
        widths = [max(len(str(row[i])) for row in rows) for i in range(len(rows[0]))]
        for row in rows:
            lines.append("  ".join(str(c).ljust(w) for c, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="heightlab", description="Exact heights, degrees and semistability on ℙ(E_T).")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--lattice")
    ap.add_argument("--rep")
    ap.add_argument("--point")
    ap.add_argument("--gens")
    ap.add_argument("--translate", help="JSON {'schema': 1, 'g': [[...]]} translating the point before the drift")
    ap.add_argument("--lambda", dest="lam", help="comma-separated integer weights summing to zero")
    ap.add_argument("--base", type=int, default=2)
    ap.add_argument("--steps", type=int, default=15)
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--digits", type=int, default=17)
    ap.add_argument("--format", choices=("json", "csv", "text"), help="default: text for degree and height, json otherwise")
    ap.add_argument("--out")
    ap.add_argument("--N", dest="n", type=int)
    ap.add_argument("--budget", type=int, default=200)
    ap.add_argument("--workers", type=int, default=1)
    return ap


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    if cfg.format is None:
        cfg.format = TEXT_DEFAULT.get(cfg.command, "json")
    try:
        if cfg.digits < 1:
            raise InputError("--digits", "must be positive")
        body, status = HANDLERS[cfg.command](cfg)
    except InputError as exc:
        print(_color(f"error: {exc}", "31"), file=stderr)
        return EXIT_INVALID
    text = _render(cfg, body)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    if status == EXIT_VIOLATION:
        print(_color("CERTIFIED BOUND VIOLATED: this is a bug in heightlab, please report it", "1;31"), file=stderr)
    return status


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = RunConfig(**vars(ns))
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
