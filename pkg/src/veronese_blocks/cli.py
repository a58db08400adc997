"""Command-line front end: ``veronese-blocks <command> [options]``.

Reports carry exact rationals as ``"p/q"`` strings.  Exit status is 0 on
success, 1 on usage or precondition errors, 2 when a verified claim fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from . import confblocks as cb
from . import verify as vf
from .core import FCurve, PreconditionError, basis_curve, format_rational
from .veronese import (
    WeightData,
    hassett_contracts,
    intersect,
    jensen_app_class,
    jensen_closed_form,
    jensen_vector,
    leg_degrees,
    on_wall,
    phi,
    sigma,
    standard_weights,
    symmetric_class,
    veronese_contracts,
)

SCHEMA = "vb-1"
COMMANDS = ("sigma", "intersect", "class", "rank", "cb-intersect", "verify", "table")
FORMATS = ("plain", "json", "csv")
CLAIMS = (
    "poscomb", "increasing", "determinant", "same-face", "kequalsell",
    "wall", "contraction", "jensen", "classes", "criterion",
)
TABLES = ("jensen", "ranks", "classes", "cb-vectors")
THREADS_ENV = "VERONESE_BLOCKS_THREADS"
ORACLE_PATH_LIMIT = 12

EXIT_OK, EXIT_USAGE, EXIT_FALSIFIED = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class JobConfig:
    command: str
    parameters: dict[str, Any] = field(default_factory=dict)
    output_format: str = "plain"
    output_path: str | None = None
    check_oracle: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}; choose from {', '.join(COMMANDS)}")
        if self.output_format not in FORMATS:
            raise UsageError(f"unknown format {self.output_format!r}; choose from {', '.join(FORMATS)}")


# ---------------------------------------------------------------- parameters

def _int(params, key, default=None, required=True):
    v = params.get(key, default)
    if v is None:
        if required:
            raise UsageError(f"missing required parameter --{key.replace('_', '-')}")
        return None
    try:
        return int(v)
    except (TypeError, ValueError):
        raise UsageError(f"--{key.replace('_', '-')} must be an integer, got {v!r}") from None


def _int_list(text, what):
    try:
        return [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"{what} must be a comma-separated list of integers, got {text!r}") from None


def _rational_list(text):
    """Comma list of rationals; ``x^m`` repeats x m times."""
    out = []
    for tok in str(text).split(","):
        tok = tok.strip()
        if not tok:
            continue
        value, _, times = tok.partition("^")
        try:
            out.extend([Fraction(value)] * (int(times) if times else 1))
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"bad rational {tok!r}") from None
    return out


def _weight_data(params) -> WeightData:
    if params.get("d") is not None:
        if params.get("gamma") is None or params.get("weights") is None:
            raise UsageError("--d needs --gamma and --weights")
        try:
            gamma = Fraction(str(params["gamma"]))
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"bad --gamma {params['gamma']!r}") from None
        return WeightData(_int(params, "d"), gamma, tuple(_rational_list(params["weights"])))
    return standard_weights(_int(params, "ell"), _int(params, "g"))


def _weight_inputs(w: WeightData) -> dict:
    return {"d": w.d, "gamma": format_rational(w.gamma), "weights": [format_rational(a) for a in w.weights]}


def _fcurve(params, n) -> FCurve:
    if params.get("parts"):
        parts = tuple(tuple(_int_list(p, "--parts")) for p in str(params["parts"]).split("|"))
        return FCurve(n, parts)
    if params.get("profile"):
        prof = _int_list(params["profile"], "--profile")
        F = FCurve.from_profile(prof)
        if F.n != n:
            raise PreconditionError(f"profile {prof} sums to {F.n}, weights have n={n}")
        return F
    raise UsageError("give the F-curve with --profile a,b,c,d or --parts 1,2|3|4|5,...")


# ---------------------------------------------------------------- commands

def _oracle_ranks(vectors) -> dict:
    """Recount every rank with path enumeration where it is small enough."""
    checked, mismatches = 0, []
    for v in vectors:
        if v.n > ORACLE_PATH_LIMIT:
            continue
        checked += 1
        if cb.count_paths(v) != cb.rank(v):
            mismatches.append({"level": v.level, "weights": list(v.weights)})
    return {"checked": checked, "pass": not mismatches, "mismatches": mismatches}


def cmd_sigma(params, oracle):
    w = _weight_data(params)
    if params.get("subset") is None:
        raise UsageError("missing required parameter --subset")
    J = _int_list(params["subset"], "--subset")
    if any(not 1 <= j <= w.n for j in J) or len(set(J)) != len(J):
        raise PreconditionError(f"subset {J} is not a subset of 1..{w.n}")
    inputs = dict(_weight_inputs(w), subset=J)
    outputs = {"phi": format_rational(phi(J, w)), "sigma": sigma(J, w), "on_wall": on_wall(J, w)}
    return inputs, outputs, None


def cmd_intersect(params, oracle):
    w = _weight_data(params)
    F = _fcurve(params, w.n)
    inputs = dict(_weight_inputs(w), parts=[list(p) for p in F.parts])
    deg = leg_degrees(F, w)
    outputs = {
        "value": format_rational(intersect(F, w)),
        "sigma": list(deg.sigma),
        "pair_sigma": list(deg.pair_sigma),
        "b": deg.b,
        "c": list(deg.c),
        "veronese_contracts": veronese_contracts(F, w),
        "hassett_contracts": hassett_contracts(F, w),
    }
    extra = None
    if oracle and params.get("d") is None:
        ell, g = _int(params, "ell"), _int(params, "g")
        prof = F.profile
        i = next((p for p in prof if sorted(prof) == sorted((1, 1, p, 2 * g - p))), None)
        if i is not None and i <= g:
            expected = jensen_closed_form(ell, g, min(i, 2 * g - i))
            ok = expected == intersect(F, w)
            extra = {"oracle": {"closed_form": format_rational(expected), "pass": ok}}
    return inputs, outputs, extra


def cmd_class(params, oracle):
    if params.get("vector") is not None:
        n = _int(params, "n")
        vals = _rational_list(params["vector"])
        cls = symmetric_class(vals, n)
        inputs = {"n": n, "vector": [format_rational(x) for x in vals]}
        return inputs, {"coefficients": _class_dict(cls)}, None
    ell, g = _int(params, "ell"), _int(params, "g")
    vec = jensen_vector(ell, g)
    cls = symmetric_class(vec)
    closed = jensen_app_class(ell, g)
    inputs = {"ell": ell, "g": g}
    outputs = {
        "intersection_vector": [format_rational(x) for x in vec.values],
        "coefficients": _class_dict(cls),
        "closed_form_agrees": cls == closed,
    }
    return inputs, outputs, None


def _class_dict(cls):
    return {f"B{r + 1}": format_rational(c) for r, c in enumerate(cls.coeffs, start=1)}


def cmd_rank(params, oracle):
    ell = _int(params, "ell")
    if params.get("weights") is None:
        raise UsageError("missing required parameter --weights")
    v = cb.SL2WeightVector(ell, tuple(_int_list(params["weights"], "--weights")))
    inputs = {"level": ell, "weights": list(v.weights)}
    outputs = {"rank": cb.rank(v), "nonzero_criterion": cb.nonzero_criterion(v)}
    if v.total % 2 == 0:
        outputs["critical_level"] = cb.critical_level(v)
    extra = {"oracle": _oracle_ranks([v])} if oracle else None
    return inputs, outputs, extra


def cmd_cb_intersect(params, oracle):
    family = params.get("family") or "omega1"
    ell = _int(params, "ell")
    if family == "omega1":
        g = _int(params, "g")
        n = 2 * g + 2
        fn = lambda i: cb.cb_intersect_omega1(ell, g, i)  # noqa: E731
        inputs = {"family": family, "ell": ell, "g": g}
    elif family == "kequalsell":
        n = _int(params, "n")
        g = n // 2 - 1
        fn = lambda i: cb.cb_intersect_kequalsell(ell, n, i)  # noqa: E731
        inputs = {"family": family, "ell": ell, "n": n}
    else:
        raise UsageError(f"--family must be omega1 or kequalsell, got {family!r}")
    i = _int(params, "i", required=False)
    indices = [i] if i is not None else list(range(1, g + 1))
    outputs = {"values": {str(j): fn(j) for j in indices}}
    extra = None
    if oracle:
        k = 1 if family == "omega1" else ell
        vecs = []
        for j in indices:
            vecs.append(cb.SL2WeightVector(ell, (k,) * j + (ell,)))
            vecs.append(cb.SL2WeightVector(ell, (k,) * (n - j - 2) + (ell,)))
        extra = {"oracle": _oracle_ranks(vecs)}
    return inputs, outputs, extra


def _verify_jensen(params):
    g_max = _int(params, "g")
    failures = []
    checked = 0
    for g in range(1, g_max + 1):
        for ell in range(1, g + 1):
            if g + 1 - ell < 2:
                continue
            n = 2 * g + 2
            w = standard_weights(ell, g)
            for i in range(1, g + 1):
                checked += 1
                got = intersect(basis_curve(n, i), w)
                if got != jensen_closed_form(ell, g, i):
                    failures.append({"ell": ell, "g": g, "i": i, "value": format_rational(got)})
    return vf.CheckReport("jensen", not failures, {"gmax": g_max}, {"checked": checked},
                          failures[0] if failures else None)


def _verify_classes(params):
    g_max = _int(params, "g")
    for g in range(1, g_max + 1):
        for ell in range(1, g + 1):
            a = symmetric_class(jensen_vector(ell, g))
            b = jensen_app_class(ell, g)
            if a != b:
                return vf.CheckReport("classes", False, {"gmax": g_max}, {},
                                      {"ell": ell, "g": g, "pipeline": _class_dict(a), "closed": _class_dict(b)})
    return vf.CheckReport("classes", True, {"gmax": g_max}, {"pairs": g_max * (g_max + 1) // 2})


def _verify_criterion(params):
    ell, n_max = _int(params, "ell"), _int(params, "n")
    from itertools import product

    checked = 0
    for n in range(n_max + 1):
        for ks in product(range(ell + 1), repeat=n):
            v = cb.SL2WeightVector(ell, ks)
            checked += 1
            if cb.nonzero_criterion(v) != (cb.rank(v) > 0):
                return vf.CheckReport("criterion", False, {"ell": ell, "nmax": n_max},
                                      {"checked": checked}, {"weights": list(ks)})
    return vf.CheckReport("criterion", True, {"ell": ell, "nmax": n_max}, {"checked": checked})


VERIFIERS: dict[str, Callable[[dict], vf.CheckReport]] = {
    "poscomb": lambda p: vf.check_poscomb(_int(p, "ell"), _int(p, "g")),
    "increasing": lambda p: vf.check_increasing(_int(p, "ell"), _int(p, "g")),
    "determinant": lambda p: vf.check_determinant_lemma(_int(p, "ell"), _int(p, "imax", 16)),
    "same-face": lambda p: vf.check_same_face(_int(p, "ell"), _int(p, "g")),
    "kequalsell": lambda p: vf.check_kequalsell(_int(p, "ell"), _int(p, "n")),
    "wall": lambda p: vf.check_wall_independence(_weight_data(p), _int(p, "nmax_curves", 100_000)),
    "contraction": lambda p: vf.check_contraction(_int(p, "ell"), _int(p, "k"), _int(p, "n")),
    "jensen": _verify_jensen,
    "classes": _verify_classes,
    "criterion": _verify_criterion,
}


def cmd_verify(params, oracle):
    claim = params.get("claim")
    if claim not in VERIFIERS:
        raise UsageError(f"verify needs a claim from {', '.join(CLAIMS)}, got {claim!r}")
    report = VERIFIERS[claim](params)
    inputs = dict(report.inputs, claim=claim)
    extra = {"pass": report.passed}
    if not report.passed:
        extra["witness"] = report.witness
    return inputs, report.outputs, extra


# ---------------------------------------------------------------- tables

def _threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None


def _parallel_map(fn, cells):
    # map() keeps input order, so output is independent of completion order
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        return list(pool.map(fn, cells))


def _guard(size, limit, what, cost):
    if size > limit:
        raise PreconditionError(
            f"{what}={size} exceeds the limit {limit} (estimated {cost} cells); raise --max-g/--max-j to override"
        )


def cmd_table(params, oracle):
    kind = params.get("kind")
    max_g = _int(params, "max_g", 12)
    max_j = _int(params, "max_j", 60)
    oracle_info = None
    if kind == "jensen":
        g = _int(params, "g")
        _guard(g, max_g, "g", g * g)
        cells = [(ell, i) for ell in range(1, g + 1) for i in range(1, g + 1)]
        values = _parallel_map(lambda c: jensen_closed_form(c[0], g, c[1]), cells)
        header = ["ell", "i", "value"]
        rows = [[ell, i, format_rational(v)] for (ell, i), v in zip(cells, values)]
        if oracle:
            def formula(c):
                ell, i = c
                if g + 1 - ell < 2:
                    return None
                return intersect(basis_curve(2 * g + 2, i), standard_weights(ell, g))
            got = _parallel_map(formula, cells)
            bad = [list(c) for c, v, x in zip(cells, values, got) if x is not None and x != v]
            oracle_info = {"checked": sum(x is not None for x in got), "pass": not bad, "mismatches": bad}
        inputs = {"kind": kind, "g": g}
    elif kind == "ranks":
        ell, jmax = _int(params, "ell"), _int(params, "jmax")
        _guard(jmax, max_j, "jmax", (jmax + 1) * (ell + 1))
        cells = [(j, t) for j in range(jmax + 1) for t in range(ell + 1)]
        values = _parallel_map(lambda c: cb.rank_recurrence(ell, c[0], c[1]), cells)
        header = ["j", "t", "rank"]
        rows = [[j, t, v] for (j, t), v in zip(cells, values)]
        if oracle:
            vecs = [cb.SL2WeightVector(ell, (1,) * j + (t,)) for j, t in cells]
            dp = [cb.rank(v) for v in vecs]
            info = _oracle_ranks(vecs)
            bad = [list(c) for c, a, b in zip(cells, values, dp) if a != b]
            info["recurrence_matches_dp"] = not bad
            info["pass"] = info["pass"] and not bad
            oracle_info = info
        inputs = {"kind": kind, "ell": ell, "jmax": jmax}
    elif kind == "classes":
        g = _int(params, "g")
        _guard(g, max_g, "g", g * g)
        classes = _parallel_map(lambda ell: jensen_app_class(ell, g), list(range(1, g + 1)))
        header = ["ell", "r", "basis", "coefficient"]
        rows = [[ell, r, f"B{r + 1}", format_rational(c)]
                for ell, cls in enumerate(classes, start=1) for r, c in enumerate(cls.coeffs, start=1)]
        if oracle:
            pipe = _parallel_map(lambda ell: symmetric_class(jensen_vector(ell, g)), list(range(1, g + 1)))
            bad = [ell for ell, (a, b) in enumerate(zip(pipe, classes), start=1) if a != b]
            oracle_info = {"checked": g, "pass": not bad, "mismatches": bad}
        inputs = {"kind": kind, "g": g}
    elif kind == "cb-vectors":
        g = _int(params, "g")
        _guard(g, max_g, "g", g * g)
        cells = [(ell, i) for ell in range(1, g + 1) for i in range(1, g + 1)]
        values = _parallel_map(lambda c: cb.cb_intersect_omega1(c[0], g, c[1]), cells)
        header = ["ell", "i", "value"]
        rows = [[ell, i, v] for (ell, i), v in zip(cells, values)]
        if oracle:
            vecs = [cb.SL2WeightVector(ell, (1,) * m + (ell,)) for ell, i in cells for m in (i, 2 * g - i)]
            oracle_info = _oracle_ranks(vecs)
        inputs = {"kind": kind, "g": g}
    else:
        raise UsageError(f"table needs a kind from {', '.join(TABLES)}, got {kind!r}")
    outputs = {"header": header, "rows": rows}
    return inputs, outputs, ({"oracle": oracle_info} if oracle_info is not None else None)


HANDLERS = {
    "sigma": cmd_sigma,
    "intersect": cmd_intersect,
    "class": cmd_class,
    "rank": cmd_rank,
    "cb-intersect": cmd_cb_intersect,
    "verify": cmd_verify,
    "table": cmd_table,
}


# ---------------------------------------------------------------- emitters

def _jsonable(x):
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def dump_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _flatten(prefix, x, out):
    if isinstance(x, dict):
        for k, v in x.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(x, list) and not any(isinstance(v, (dict, list)) for v in x):
        out.append((prefix, " ".join(str(v) for v in x)))
    elif isinstance(x, list):
        for i, v in enumerate(x):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        out.append((prefix, "" if x is None else str(x).lower() if isinstance(x, bool) else str(x)))


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return dump_json(report)
    outputs = report["outputs"]
    tabular = report["command"] == "table"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if tabular:
            writer.writerow(outputs["header"])
            writer.writerows(outputs["rows"])
        else:
            writer.writerow(["key", "value"])
            pairs: list = []
            _flatten("", {k: v for k, v in report.items() if k != "schema"}, pairs)
            writer.writerows(pairs)
        return buf.getvalue()
    lines = []
    if tabular:
        lines.append("\t".join(outputs["header"]))
        lines.extend("\t".join(str(c) for c in row) for row in outputs["rows"])
        rest = {k: v for k, v in report.items() if k not in ("schema", "outputs", "command", "inputs")}
    else:
        rest = {k: v for k, v in report.items() if k not in ("schema", "command")}
    pairs = []
    _flatten("", rest, pairs)
    lines.extend(f"{k}: {v}" for k, v in pairs)
    return "\n".join(lines) + "\n"


def run(config: JobConfig) -> tuple[int, str]:
    """Execute one job; returns the exit status and the rendered report."""
    params = dict(config.parameters)
    inputs, outputs, extra = HANDLERS[config.command](params, config.check_oracle)
    report = {"schema": SCHEMA, "command": config.command, "inputs": inputs, "outputs": outputs}
    if extra:
        report.update(extra)
    report = _jsonable(report)
    status = EXIT_OK
    if report.get("pass") is False or (report.get("oracle") or {}).get("pass") is False:
        status = EXIT_FALSIFIED
    text = render(report, config.output_format)
    if config.output_path:
        with open(config.output_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return status, text


# ---------------------------------------------------------------- argv

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def read_config_file(path: str) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment; dashes and underscores in keys are equivalent."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def _add_weight_opts(p):
    p.add_argument("--ell", help="level; with --g selects the standard weights")
    p.add_argument("--g")
    p.add_argument("--d", help="degree, for explicit weights")
    p.add_argument("--gamma")
    p.add_argument("--weights", help="comma list of rationals, x^m repeats x m times")


def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subparser from resetting a global flag given before the command
    common = _Parser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--format", dest="format", choices=FORMATS)
    common.add_argument("--out", dest="out")
    common.add_argument("--config", dest="config")
    common.add_argument("--check-oracle", dest="check_oracle", action="store_true")

    parser = _Parser(prog="veronese-blocks", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("sigma", parents=[common], help="phi and sigma of a subset")
    _add_weight_opts(p)
    p.add_argument("--subset")

    p = sub.add_parser("intersect", parents=[common], help="F-curve intersection with D_{gamma,A}")
    _add_weight_opts(p)
    p.add_argument("--profile")
    p.add_argument("--parts")

    p = sub.add_parser("class", parents=[common], help="symmetric class in the B basis")
    p.add_argument("--ell")
    p.add_argument("--g")
    p.add_argument("--n")
    p.add_argument("--vector")

    p = sub.add_parser("rank", parents=[common], help="sl_2 conformal block rank")
    p.add_argument("--ell")
    p.add_argument("--weights")

    p = sub.add_parser("cb-intersect", parents=[common], help="conformal block divisor . F_i")
    p.add_argument("--family", choices=("omega1", "kequalsell"))
    p.add_argument("--ell")
    p.add_argument("--g")
    p.add_argument("--n")
    p.add_argument("--i")

    p = sub.add_parser("verify", parents=[common], help="check a claimed identity or inequality")
    p.add_argument("claim", nargs="?", choices=CLAIMS)
    _add_weight_opts(p)
    for opt in ("--imax", "--n", "--k", "--nmax-curves"):
        p.add_argument(opt)

    p = sub.add_parser("table", parents=[common], help="tabulate a family of values")
    p.add_argument("kind", nargs="?", choices=TABLES)
    for opt in ("--g", "--ell", "--jmax", "--max-g", "--max-j"):
        p.add_argument(opt)
    return parser


GLOBAL_KEYS = ("format", "out", "config", "check_oracle", "command")


def config_from_argv(argv: list[str]) -> JobConfig:
    # find --config first: the file may name the command whose options follow
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    config_path = pre.parse_known_args(argv)[0].config
    file_values = read_config_file(config_path) if config_path else {}
    if "command" in file_values and not any(a in COMMANDS for a in argv):
        positional = [file_values[k] for k in ("claim", "kind") if k in file_values]
        argv = [file_values["command"]] + positional + argv
    ns = build_parser().parse_args(argv)
    command = ns.command
    if command is None:
        raise UsageError("no command given")
    values = {k: v for k, v in file_values.items() if k not in ("command",)}
    values.update({k: v for k, v in vars(ns).items() if v is not None})
    params = {k: v for k, v in values.items() if k not in GLOBAL_KEYS}
    check = values.get("check_oracle", False)
    if isinstance(check, str):
        check = check.lower() in ("1", "true", "yes", "on")
    return JobConfig(
        command=command,
        parameters=params,
        output_format=values.get("format") or "plain",
        output_path=values.get("out"),
        check_oracle=bool(check),
    )


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        config = config_from_argv(argv)
        status, text = run(config)
    except (UsageError, PreconditionError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except vf.FalsificationError as exc:
        sys.stderr.write(f"falsified: {exc}\n")
        return EXIT_FALSIFIED
    if not config.output_path:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
