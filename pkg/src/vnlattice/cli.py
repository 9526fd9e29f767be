"""Command-line front end.

Emits CSV or JSON documents with deterministic formatting: JSON floats use
the shortest round-trip representation (probabilities and tail bounds in
distribution dumps carry 17 significant digits), CSV numerics always carry
17 significant digits. Identical invocations produce byte-identical output.

Exit codes: 0 success, 1 domain/precision/divergence/analysis error,
2 verification failures from ``verify``, 64 unparseable state spec,
74 file I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

from .analysis import (conjecture_probe, coherent_entropy_result,
                       default_probe_family, minimize_over_c, scan_z, sweep_c,
                       verify_suite)
from .distribution import build_distribution, distribution_document
from .entropy import (REFERENCE_LATTICE_MINIMUM, lattice_entropy, wehrl_entropy,
                      wehrl_reference)
from .errors import (AnalysisError, DivergenceError, DomainError,
                     PrecisionError, UsageError)
from .lattice import SQRT_2PI, LatticeConfig
from .states import CoherentParam, parse_state_spec


class Sig17(float):
    """Marks a float for 17-significant-digit rendering in JSON."""


def _float_text(x) -> str:
    if isinstance(x, Sig17):
        return format(float(x), ".17g")
    return repr(float(x))


def render_json(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _float_text(obj)
    if isinstance(obj, str):
        return '"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        inner = ",\n".join(
            f'{pad}  {render_json(str(k))}: {render_json(v, indent + 1)}'
            for k, v in obj.items())
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        inner = ",\n".join(f"{pad}  {render_json(v, indent + 1)}" for v in obj)
        return "[\n" + inner + "\n" + pad + "]"
    raise TypeError(f"cannot render {type(obj).__name__}")


def render_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        out = []
        for v in row:
            if v is None:
                out.append("")
            elif isinstance(v, bool):
                out.append("true" if v else "false")
            elif isinstance(v, float):
                out.append(format(v, ".17g"))
            else:
                out.append(v)
        writer.writerow(out)
    return buf.getvalue()


def _config_doc(cfg: LatticeConfig) -> dict:
    return {"lambda": cfg.lam, "hbar": cfg.hbar, "b": cfg.b, "c": cfg.c}


def _resolve_config(args) -> LatticeConfig:
    if args.b is not None:
        if args.c is not None:
            raise UsageError("give either --c or --b, not both")
        return LatticeConfig.from_physical(args.lam, args.hbar, args.b)
    c = 1.0 if args.c is None else args.c
    if args.lam != 1.0 or args.hbar != 1.0:
        return LatticeConfig.from_physical(args.lam, args.hbar, c * args.lam * SQRT_2PI)
    return LatticeConfig.from_aspect(c)


def _resolve_state(args):
    state = parse_state_spec(args.state)
    tail = args.tail_tol
    if tail is None:
        tail = 1e-12 if isinstance(state, CoherentParam) else 1e-10
    return state, tail


def _order(args, fallback: int) -> int:
    return fallback if args.quad_order is None else args.quad_order


def _cmd_prob(args):
    cfg = _resolve_config(args)
    state, tail = _resolve_state(args)
    dist = build_distribution(cfg, state, tail, order=_order(args, 32))
    doc = distribution_document(dist)
    for entry in doc["entries"]:
        entry["p"] = Sig17(entry["p"])
    doc["tail_mass_bound"] = Sig17(doc["tail_mass_bound"])
    cell_budget = max(dist.quad_residual, 1e-15)
    rows = [(m, n, p, cell_budget, dist.tail_mass_bound)
            for m, n, p in dist.entries()]
    return doc, ("m", "n", "p", "error_budget", "tail_mass_bound"), rows, 0


def _cmd_entropy(args):
    cfg = _resolve_config(args)
    state, tail = _resolve_state(args)
    dist = build_distribution(cfg, state, tail, order=_order(args, 32))
    res = lattice_entropy(dist)
    doc = {
        "config": _config_doc(cfg),
        "state": args.state,
        "entropy": res.value,
        "error_budget": res.error_budget,
        "tail_mass": res.tail_mass,
        "backend": res.backend,
        "reference_minimum": REFERENCE_LATTICE_MINIMUM,
        "reference_gap": res.value - REFERENCE_LATTICE_MINIMUM,
    }
    rows = [(res.value, res.error_budget, res.tail_mass,
             REFERENCE_LATTICE_MINIMUM, res.value - REFERENCE_LATTICE_MINIMUM)]
    return doc, ("entropy", "error_budget", "tail_mass", "reference_minimum",
                 "reference_gap"), rows, 0


def _cmd_wehrl(args):
    state, _ = _resolve_state(args)
    res = wehrl_entropy(state, radius=args.radius, order=_order(args, 64))
    bound = wehrl_reference()
    doc = {
        "state": args.state,
        "wehrl_entropy": res.value,
        "error_budget": res.error_budget,
        "tail_mass": res.tail_mass,
        "backend": res.backend,
        "coherent_state_bound": bound,
        "excess_over_bound": res.value - bound,
    }
    rows = [(res.value, res.error_budget, res.tail_mass, bound, res.value - bound)]
    return doc, ("wehrl_entropy", "error_budget", "tail_mass",
                 "coherent_state_bound", "excess_over_bound"), rows, 0


def _coherent_only(args) -> complex:
    state = parse_state_spec(args.state)
    if not isinstance(state, CoherentParam):
        raise UsageError(f"this command needs a coherent state, got {args.state!r}")
    return state.z


def _cmd_sweep_c(args):
    if args.steps < 2:
        raise UsageError("need at least 2 sweep steps")
    if not 0 < args.c_from < args.c_to:
        raise UsageError("need 0 < --from < --to")
    z = _coherent_only(args)
    tail = 1e-12 if args.tail_tol is None else args.tail_tol
    step = (args.c_to - args.c_from) / (args.steps - 1)
    c_values = [args.c_from + i * step for i in range(args.steps)]
    table = sweep_c(c_values, z, tail)
    doc = {"state": args.state,
           "records": [{"c": r.parameter, "entropy": r.entropy,
                        "error_budget": r.error_budget, "tail_mass": r.tail_mass}
                       for r in table.records]}
    rows = [(r.parameter, r.entropy, r.error_budget, r.tail_mass)
            for r in table.records]
    return doc, ("c", "entropy", "error_budget", "tail_mass"), rows, 0


def _cmd_scan_z(args):
    cfg = _resolve_config(args)
    try:
        nx_text, ny_text = args.grid.lower().split("x")
        nx, ny = int(nx_text), int(ny_text)
    except ValueError:
        raise UsageError(f"--grid must look like 9x9, got {args.grid!r}") from None
    tail = 1e-12 if args.tail_tol is None else args.tail_tol
    records = scan_z(cfg, nx, ny, tail)
    doc = {"config": _config_doc(cfg), "grid": args.grid,
           "records": [{"re_z": r.re_z, "im_z": r.im_z, "entropy": r.entropy,
                        "error_budget": r.error_budget, "tail_mass": r.tail_mass}
                       for r in records]}
    rows = [(r.re_z, r.im_z, r.entropy, r.error_budget, r.tail_mass)
            for r in records]
    return doc, ("re_z", "im_z", "entropy", "error_budget", "tail_mass"), rows, 0


def _cmd_minimize_c(args):
    z = _coherent_only(args)
    tail = 1e-12 if args.tail_tol is None else args.tail_tol
    result = minimize_over_c(args.lo, args.hi, args.tol, z, tail)
    res, _ = coherent_entropy_result(
        LatticeConfig.from_aspect(result.c_star), z, tail)
    doc = {"state": args.state, "c_star": result.c_star, "s_star": result.s_star,
           "error_budget": res.error_budget,
           "bracket_lo": result.bracket[0], "bracket_hi": result.bracket[1],
           "evaluations": result.evaluations}
    rows = [(result.c_star, result.s_star, res.error_budget,
             result.bracket[0], result.bracket[1], result.evaluations)]
    return doc, ("c_star", "s_star", "error_budget", "bracket_lo", "bracket_hi",
                 "evaluations"), rows, 0


def _cmd_probe(args):
    cfg = _resolve_config(args)
    family = default_probe_family(cfg)
    for spec in args.extra_states or []:
        family.append((spec, parse_state_spec(spec)))
    tail = 1e-10 if args.tail_tol is None else args.tail_tol
    report = conjecture_probe(family, cfg, tail)
    doc = {
        "config": _config_doc(cfg),
        "reference": report.reference,
        "minimum": report.minimum,
        "witness": report.witness,
        "below_reference": list(report.below_reference),
        "entries": [{"state": e.label, "entropy": e.entropy,
                     "error_budget": e.error_budget, "tail_mass": e.tail_mass}
                    for e in report.entries],
    }
    rows = [(e.label, e.entropy, e.error_budget, e.tail_mass)
            for e in report.entries]
    return doc, ("state", "entropy", "error_budget", "tail_mass"), rows, 0


def _cmd_verify(args):
    grid = None
    if args.c is not None:
        grid = [LatticeConfig.from_aspect(args.c)]
    report = verify_suite(grid, fd_step=args.fd_step)
    doc = {
        "checks": [{"name": c.name, "paper_ref": c.paper_ref,
                    "residual": c.residual, "tolerance": c.tolerance,
                    "pass": c.passed, "note": c.note}
                   for c in report.checks],
        "summary": report.summary(),
    }
    rows = [(c.name, c.paper_ref, c.residual, c.tolerance, c.passed, c.note)
            for c in report.checks]
    code = 0 if report.all_passed else 2
    return doc, ("name", "paper_ref", "residual", "tolerance", "pass", "note"), rows, code


_COMMANDS = {
    "prob": _cmd_prob,
    "entropy": _cmd_entropy,
    "wehrl": _cmd_wehrl,
    "sweep-c": _cmd_sweep_c,
    "scan-z": _cmd_scan_z,
    "minimize-c": _cmd_minimize_c,
    "probe": _cmd_probe,
    "verify": _cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    lat = common.add_argument_group("lattice")
    lat.add_argument("--c", type=float, default=None,
                     help="aspect ratio (default 1; square lattice)")
    lat.add_argument("--lambda", dest="lam", type=float, default=1.0,
                     help="oscillator width (physical units)")
    lat.add_argument("--hbar", type=float, default=1.0)
    lat.add_argument("--b", type=float, default=None,
                     help="position lattice spacing (overrides --c)")
    tol = common.add_argument_group("tolerances")
    tol.add_argument("--tail-tol", type=float, default=None,
                     help="certified tail bound (default 1e-12 closed form, 1e-10 quadrature)")
    tol.add_argument("--quad-order", type=int, default=None,
                     help="tensor quadrature order (default 32; 64 for wehrl)")
    tol.add_argument("--fd-step", type=float, default=1e-4,
                     help="finite-difference step for stationarity checks")
    out = common.add_argument_group("output")
    out.add_argument("--format", choices=("csv", "json"), default="json")
    out.add_argument("--output", default="-", help="output path, '-' for stdout")

    parser = argparse.ArgumentParser(
        prog="vnlattice",
        description="Entropy of quantum states on the phase-space lattice "
                    "via cell-averaged coherent-plane probabilities.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prob", parents=[common],
                       help="dump the cell probability distribution")
    p.add_argument("--state", required=True)

    p = sub.add_parser("entropy", parents=[common],
                       help="lattice entropy of a state")
    p.add_argument("--state", required=True)

    p = sub.add_parser("wehrl", parents=[common],
                       help="continuous phase-space entropy comparator")
    p.add_argument("--state", required=True)
    p.add_argument("--radius", type=float, default=8.0,
                   help="half-side of the integration square")

    p = sub.add_parser("sweep-c", parents=[common],
                       help="entropy sweep over the aspect ratio")
    p.add_argument("--from", dest="c_from", type=float, required=True)
    p.add_argument("--to", dest="c_to", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--state", default="coherent:0,0")

    p = sub.add_parser("scan-z", parents=[common],
                       help="entropy over a grid of displacements in one cell")
    p.add_argument("--grid", default="9x9")

    p = sub.add_parser("minimize-c", parents=[common],
                       help="golden-section minimization over the aspect ratio")
    p.add_argument("--lo", type=float, default=0.5)
    p.add_argument("--hi", type=float, default=2.0)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--state", default="coherent:0,0")

    p = sub.add_parser("probe", parents=[common],
                       help="minimum-entropy probe over a state family")
    p.add_argument("--state", dest="extra_states", action="append",
                   help="extra family member (repeatable)")

    sub.add_parser("verify", parents=[common],
                   help="run the bundled verification audit")
    return parser


def _write_output(text: str, path: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc, header, rows, code = _COMMANDS[args.command](args)
        if args.format == "json":
            text = render_json(doc) + "\n"
        else:
            text = render_csv(header, rows)
        _write_output(text, args.output)
    except UsageError as exc:
        print(f"vnlattice: {exc}", file=sys.stderr)
        return 64
    except OSError as exc:
        print(f"vnlattice: {exc}", file=sys.stderr)
        return 74
    except (DomainError, PrecisionError, DivergenceError, AnalysisError) as exc:
        print(f"vnlattice: {exc}", file=sys.stderr)
        return 1
    return code


if __name__ == "__main__":
    sys.exit(main())
