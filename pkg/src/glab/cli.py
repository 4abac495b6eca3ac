"""Command-line front end: ``glab <command> [flags]``.

Every command writes one JSON document (stdout or ``--out``).  Floats are
written with 17 significant digits so doubles survive a round trip, and
key order is fixed, so equal inputs give byte-identical files.

Exit codes: 0 success, 2 usage or descriptor error, 3 budget or window
error, 4 a failed (non-advisory) check, 1 any other library error.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import math
import sys
import time
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import numpy as np

from .core import BudgetError, GlabError, SparseVector, WindowError, restrict
from .greedy import GreedyConfig, canonical_greedy_set, chebyshev_step, greedy_sets
from .spaces import BlockSpec, DescriptorError, parse_space

EXIT_OK, EXIT_ERROR, EXIT_USAGE, EXIT_BUDGET, EXIT_CHECK = 0, 1, 2, 3, 4

PARAM_NAMES = (
    "mu_tilde", "mu_tilde_d", "mu", "mu_d", "mu_tilde_d_alt", "mu_d_alt", "gamma", "phi_r",
    "theta", "theta_sep", "k", "k_c", "g", "g_c", "g_tilde",
)


class UsageError(GlabError):
    pass


# ---------------------------------------------------------------------------
# serialization


def _plain(obj):
    """Convert library objects to JSON-ready builtins."""
    if hasattr(obj, "to_json"):
        return _plain(obj.to_json())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: _plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def _encode(obj, indent=0) -> str:
    pad, inner = "  " * indent, "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if math.isfinite(obj):
            return format(obj, ".17g")
        return '"inf"' if obj > 0 else ('"-inf"' if obj < 0 else '"nan"')
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (list, dict)) for v in obj):
            return "[" + ", ".join(_encode(v) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + _encode(v, indent + 1) for v in obj) + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {_encode(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj) -> str:
    """JSON text with 17-significant-digit floats and a trailing newline."""
    return _encode(_plain(obj)) + "\n"


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# ---------------------------------------------------------------------------
# argument handling


def _parse_x(text: str) -> SparseVector:
    """Vector from inline text (``"1:0.5 3:-1"`` or JSON) or from a file path."""
    p = Path(text)
    if len(text) < 4096 and p.is_file():
        text = p.read_text()
    try:
        return SparseVector.loads(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _vector(args, space) -> SparseVector:
    x = _parse_x(args.x)
    space.check(x)
    return x


def _parse_t(text) -> float:
    try:
        if isinstance(text, str) and "/" in text:
            a, b = text.split("/")
            return float(a) / float(b)
        return float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad t {text!r}") from exc


def _parse_p(text) -> float:
    if str(text).lower() in ("inf", "infinity"):
        return math.inf
    return _parse_t(text)


def _int_list(text) -> list:
    if text is None:
        return []
    try:
        return [int(v) for v in str(text).replace(",", " ").split()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from exc


def read_config(path) -> dict:
    """``key = value`` lines; ``#`` starts a comment; keys use dashes or underscores."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        k, v = line.split("=", 1)
        out[k.strip().replace("-", "_")] = v.strip()
    return out


def _common(p: argparse.ArgumentParser):
    p.add_argument("--space", required=False, default=None,
                   help="space descriptor, e.g. summing:8, lp:2:16, trig:1:64, block:default:2")
    p.add_argument("--m", type=int, default=None, help="order m")
    p.add_argument("--t", type=_parse_t, default=1.0, help="weakness parameter in (0, 1]")
    p.add_argument("--tol", type=float, default=None, help="minimizer tolerance")
    p.add_argument("--budget", type=int, default=None, help="evaluation budget per restart")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--window", default=None, help="index window A:B")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--out", default=None, help="JSON output file (default stdout)")
    p.add_argument("--csv", default=None, help="CSV output file")
    p.add_argument("--plot-data", default=None, help="two-column text output (m, value)")
    p.add_argument("--manifest", default=None, help="write a run manifest JSON here")
    p.add_argument("--config", default=None, help="file of key = value defaults")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="glab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", help="norm of a vector")
    _common(p)
    p.add_argument("--x", required=False)

    p = sub.add_parser("greedy", help="t-greedy sets and the plain greedy residual")
    _common(p)
    p.add_argument("--x", required=False)
    p.add_argument("--all-sets", action="store_true", help="list every t-greedy set")

    p = sub.add_parser("cheb", help="one Chebyshev t-greedy step")
    _common(p)
    p.add_argument("--x", required=False)
    p.add_argument("--tie-break", choices=("lowest-index", "adversarial"), default="lowest-index")

    p = sub.add_parser("sigma", help="best m-term error inside a window")
    _common(p)
    p.add_argument("--x", required=False)

    p = sub.add_parser("params", help="basis parameter table")
    _common(p)
    p.add_argument("--param", required=False, choices=PARAM_NAMES)
    p.add_argument("--c", default=None, help="separation constant(s), comma separated")
    p.add_argument("--family", default="default",
                   help="witness family: default, vertices, patterns, random, indicators")

    p = sub.add_parser("witness", help="lower-bound witnesses")
    wsub = p.add_subparsers(dest="kind", required=True)
    for name in ("summing", "difference"):
        q = wsub.add_parser(name)
        _common(q)
        q.add_argument("--mmax", type=int, default=None, help="sweep m = 1..mmax")
        q.add_argument("--sigma", choices=("auto", "exhaustive", "approximant"), default="auto")
    q = wsub.add_parser("trig")
    _common(q)
    q.add_argument("--p", type=_parse_p, default=None, help="exponent p (number or inf)")
    q.add_argument("--grid", type=int, default=None)
    q.add_argument("--mmax", type=int, default=None, help="sweep m = 4, 8, ..., mmax and fit a slope")
    q = wsub.add_parser("block")
    _common(q)
    q.add_argument("--k", type=int, default=2)
    q.add_argument("--samples", type=int, default=200)
    q = wsub.add_parser("cesaro")
    _common(q)
    q.add_argument("--A", dest="set_a", default=None, help="indices of A, comma separated")
    q.add_argument("--B", dest="set_b", default=None, help="indices of B, comma separated")
    q.add_argument("--c", type=int, default=2)
    q.add_argument("--y", default=None, help="extra vector y (text, JSON or file)")

    p = sub.add_parser("check", help="bound and inequality checks")
    csub = p.add_subparsers(dest="kind", required=True)
    q = csub.add_parser("bounds")
    _common(q)
    q.add_argument("--family", default="default")
    q = csub.add_parser("mu-chain")
    _common(q)
    q.add_argument("--c", default=None, help="separation constants, comma separated")

    p = sub.add_parser("converge", help="residuals of Chebyshev and plain greedy steps")
    _common(p)
    p.add_argument("--x", required=False)
    p.add_argument("--mmax", type=int, default=None)
    return parser


def parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        cfg = read_config(args.config)
        given = {a.split("=", 1)[0].lstrip("-").replace("-", "_") for a in argv if a.startswith("--")}
        for key, raw in cfg.items():
            if key in given or not hasattr(args, key):
                continue
            cur = getattr(args, key)
            if isinstance(cur, bool):
                val = raw.lower() in ("1", "true", "yes", "on")
            elif key == "t":
                val = _parse_t(raw)
            elif key == "p":
                val = _parse_p(raw)
            elif key in ("m", "seed", "jobs", "budget", "mmax", "k", "samples", "grid") or isinstance(cur, int):
                val = int(raw)
            elif key == "tol" or isinstance(cur, float):
                val = float(raw)
            else:
                val = raw
            setattr(args, key, val)
    return args


def _need(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + n.replace("_", "-") for n in missing))


def _space(args):
    _need(args, "space")
    return parse_space(args.space)


def _cfg(args, tie_break="lowest-index"):
    return GreedyConfig(t=args.t, tie_break=tie_break, tol=args.tol, budget=args.budget, seed=args.seed)


def _window(args):
    if args.window is None:
        return None
    try:
        a, b = args.window.split(":")
        return tuple(range(int(a), int(b) + 1))
    except ValueError as exc:
        raise UsageError(f"bad window {args.window!r}; expected A:B") from exc


# ---------------------------------------------------------------------------
# commands


def cmd_norm(args):
    _need(args, "x")
    space = _space(args)
    x = _vector(args, space)
    return {"space": space.descriptor, "x": x, "norm": space.norm(x)}, None, None, EXIT_OK


def cmd_greedy(args):
    _need(args, "x", "m")
    space = _space(args)
    x = _vector(args, space)
    w = _window(args)
    A = canonical_greedy_set(x, args.m, w)
    out = {"space": space.descriptor, "m": args.m, "t": args.t, "greedy_set": A,
           "approximant": restrict(x, A), "residual_norm": space.norm(x - restrict(x, A))}
    if args.all_sets:
        sets = greedy_sets(x, args.m, args.t, w)
        out["sets"] = [{"set": G, "residual_norm": space.norm(x - restrict(x, G))} for G in sets]
    return out, None, None, EXIT_OK


def cmd_cheb(args):
    _need(args, "x", "m")
    space = _space(args)
    x = _vector(args, space)
    step = chebyshev_step(space, x, args.m, _cfg(args, args.tie_break), window=_window(args))
    return step, None, None, EXIT_OK


def cmd_sigma(args):
    from .params import sigma_search
    _need(args, "x", "m")
    space = _space(args)
    x = _vector(args, space)
    val, B, step = sigma_search(space, x, args.m, _window(args), args.tol)
    return {"space": space.descriptor, "m": args.m, "sigma": val, "support": B,
            "coefficients": step.coefficients}, None, None, EXIT_OK


def cmd_params(args):
    from . import params as P
    _need(args, "param", "m")
    space = _space(args)
    w = P.resolve_window(space, _window(args))
    name = args.param
    cs = _int_list(args.c)
    m, jobs = args.m, args.jobs
    if name in ("mu_tilde", "mu_tilde_d"):
        table = P.super_democracy(space, m, w, jobs)[name == "mu_tilde_d"]
    elif name in ("mu", "mu_d"):
        table = P.unsigned_democracy(space, m, w, jobs)[name == "mu_d"]
    elif name in ("mu_tilde_d_alt", "mu_d_alt"):
        table = P.democracy_alt(space, m, w, jobs, signed=name == "mu_tilde_d_alt")
    elif name == "gamma":
        table = P.gamma_cc(space, m, w, jobs)
    elif name == "phi_r":
        table = P.fundamental_function(space, m, w, jobs)
    elif name == "theta":
        table = P.theta_inf(space, m, w, tuple(cs) or P.DEFAULT_C_LIST, jobs)
    elif name == "theta_sep":
        if len(cs) != 1:
            raise UsageError("theta_sep needs exactly one --c")
        table = P.theta_sep(space, m, cs[0], w, jobs)
    else:
        fam = None if args.family == "default" else P.witness_family(space, m, args.family, w, args.seed)
        if name in ("k", "k_c"):
            table = P.conditionality_est(space, m, fam, args.seed, w)[name == "k_c"]
        else:
            table = P.quasi_greedy_est(space, m, fam, args.seed, w)[("g", "g_c", "g_tilde").index(name)]
    plot = [(k, v) for k, v in sorted(table.values.items()) if v is not None]
    return table, table.to_csv(), plot, EXIT_OK


def _sweep(fn, ms):
    reports = [fn(m) for m in ms]
    return reports, [(r.m, r.ratio) for r in reports]


def _report_csv(rows):
    lines = ["m,ratio"] + [f"{m},{format(r, '.17g')}" for m, r in rows]
    return "\n".join(lines) + "\n"


def cmd_witness(args):
    from . import experiments as E
    kind = args.kind
    if kind in ("summing", "difference"):
        fn = E.witness_summing if kind == "summing" else E.witness_difference
        if args.mmax is not None:
            reports, rows = _sweep(lambda m: fn(m, args.t, args.sigma), range(1, args.mmax + 1))
            return {"reports": reports}, _report_csv(rows), rows, EXIT_OK
        _need(args, "m")
        r = fn(args.m, args.t, args.sigma)
        return r, _report_csv([(r.m, r.ratio)]), [(r.m, r.ratio)], EXIT_OK
    if kind == "trig":
        _need(args, "p")
        if args.mmax is not None:
            ms = [2 ** j for j in range(2, int(math.log2(args.mmax)) + 1)]
            if len(ms) < 2:
                raise UsageError("--mmax must be at least 8 for a slope")
            out = E.trig_slope(args.p, tuple(ms), args.t)
            rows = list(zip(out["ms"], out["ratios"]))
            return out, _report_csv(rows), rows, EXIT_OK
        _need(args, "m")
        r = E.witness_trig(args.p, args.m, args.t, args.grid)
        return r, _report_csv([(r.m, r.ratio)]), [(r.m, r.ratio)], EXIT_OK
    if kind == "block":
        if args.space:
            space = parse_space(args.space)
            if space.kind != "block":
                raise UsageError("witness block needs a block space descriptor")
            spec = space.spec
        else:
            spec = BlockSpec.default(args.k + 1)
        out = E.witness_block(spec, args.k, args.samples, args.seed)
        code = EXIT_OK if out["gap_formula_holds"] and out["pair_bound_holds"] else EXIT_CHECK
        return out, None, [(args.k, out["ratio"])], code
    # cesaro
    _need(args, "set_a", "set_b")
    space = _space(args)
    y = _parse_x(args.y) if args.y else None
    r = E.witness_cesaro_lower(space, _int_list(args.set_a), _int_list(args.set_b), args.c, args.t,
                               y=y, m=args.m, tol=args.tol)
    code = EXIT_OK if all(b.satisfied or b.advisory for b in r.bounds) else EXIT_CHECK
    return r, _report_csv([(r.m, r.ratio)]), [(r.m, r.ratio)], code


def _checks_csv(checks):
    lines = ["name,lhs,rhs,satisfied,advisory"]
    for c in checks:
        lines.append(f"{c.name},{format(c.lhs, '.17g')},{format(c.rhs, '.17g')},{c.satisfied},{c.advisory}")
    return "\n".join(lines) + "\n"


def cmd_check(args):
    from . import experiments as E
    from . import params as P
    _need(args, "m")
    space = _space(args)
    w = _window(args)
    if args.kind == "mu-chain":
        cs = tuple(_int_list(args.c)) or P.DEFAULT_C_LIST
        res = E.mu_chain_checks(space, args.m, w, cs, args.jobs)
        checks = res["checks"]
        out = {"space": space.descriptor, "m": args.m, "tables": res["tables"], "checks": checks,
               "violations": sum(not c.satisfied for c in checks)}
    else:
        if space.kind == "summing" and space.n_max >= 5 * args.m + 1:
            report = E.witness_summing(args.m, args.t)
        elif space.kind == "difference" and space.n_max >= 4 * args.m + 1:
            report = E.witness_difference(args.m, args.t)
        else:
            report = E.random_witness(space, args.m, args.t, w, seed=args.seed)
        if report.extra.get("greedy_residual") is None and report.residual_mode == "chebyshev":
            report.extra["greedy_residual"] = space.norm(report.witness - restrict(report.witness, report.greedy_set))
        tw = w
        if tw is None:
            tw = tuple(range(1, min(space.n_max, max(report.witness.max_index, 2 * args.m, 8)) + 1))
            tw = tw[:P.VERTEX_WINDOW] if len(tw) > P.VERTEX_WINDOW else tw
        fam = None if args.family == "default" else P.witness_family(space, 2 * args.m, args.family, tw, args.seed)
        tables = E.upper_bound_tables(space, args.m, tw, fam, args.seed, args.jobs)
        checks = E.check_upper_bounds(space, args.m, args.t, report, tables)
        report.bounds = checks
        out = {"report": report, "tables": tables,
               "violations": sum(not (c.satisfied or c.advisory) for c in checks)}
    failed = any(not (c.satisfied or c.advisory) for c in checks)
    return out, _checks_csv(checks), None, EXIT_CHECK if failed else EXIT_OK


def cmd_converge(args):
    from .experiments import convergence_run
    _need(args, "x", "mmax")
    space = _space(args)
    x = _vector(args, space)
    cfg = _cfg(args, "adversarial")
    out = convergence_run(space, x, args.t, args.mmax, cfg, _window(args))
    rows = list(enumerate(out["chebyshev"]))
    lines = ["m,chebyshev,greedy"] + [
        f"{m},{format(c, '.17g')},{format(g, '.17g')}" for m, (c, g) in enumerate(zip(out["chebyshev"], out["greedy"]))
    ]
    return out, "\n".join(lines) + "\n", rows, EXIT_OK


COMMANDS = {
    "norm": cmd_norm, "greedy": cmd_greedy, "cheb": cmd_cheb, "sigma": cmd_sigma,
    "params": cmd_params, "witness": cmd_witness, "check": cmd_check, "converge": cmd_converge,
}


def _tool_version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "unknown"


def manifest(argv, args, text: str) -> dict:
    """Reproducibility record; equal manifests minus the timestamp imply equal outputs."""
    return {
        "tool_version": _tool_version(),
        "command_line": ["glab", *argv],
        "space": getattr(args, "space", None),
        "seed": getattr(args, "seed", None),
        "tolerances": {"tol": getattr(args, "tol", None), "budget": getattr(args, "budget", None)},
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "output_sha256": hashlib.sha256(text.encode()).hexdigest(),
    }


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result, csv_text, plot, code = COMMANDS[args.command](args)
    except (UsageError, DescriptorError, ValueError, argparse.ArgumentTypeError) as exc:
        print(f"glab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BudgetError, WindowError) as exc:
        print(f"glab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except GlabError as exc:
        print(f"glab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    text = dumps(result)
    _write(args.out, text)
    if args.csv and csv_text is not None:
        Path(args.csv).write_text(csv_text)
    if args.plot_data and plot is not None:
        Path(args.plot_data).write_text("".join(f"{m} {format(float(v), '.17g')}\n" for m, v in plot))
    if args.manifest:
        Path(args.manifest).write_text(dumps(manifest(argv, args, text)))
    return code


if __name__ == "__main__":
    sys.exit(main())
