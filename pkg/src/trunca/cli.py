"""Command-line surface: exact, deterministic, scriptable.

Every subcommand is a thin wrapper over one library operation; all numeric
output is exact (rationals as ``num/den`` strings) and identical invocations
produce byte-identical output.  Flags can be preloaded from a JSON config
file with ``--config``; explicitly passed flags win over the file.

Exit codes: 0 on success, 1 when a check fails or a module raises, 2 for an
invalid configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from dataclasses import dataclass, fields
from fractions import Fraction

from .charfield import (
    assemble_J,
    build_torus,
    central_character_ok,
    char_sum_regular,
    contragredient_test,
    cuspidal_filter_check,
    general_position,
)
from .errors import CartanMatrixError, ConsistencyError
from .parabolic import enumerate_semistandard
from .polyhedra import canonical_refinement, degree, random_polyhedron
from .quasipoly import brute_sum, is_prime_power, product_eval, standard_lattice_spec
from .rootdata import build_root_datum
from .truncation import TruncationContext
from .verify import SUITES, fmt_rational, run_suites


@dataclass
class RunConfig:
    """Everything a run needs, resolved from flags and the config file."""

    command: str
    ctype: str | None = None
    seed: int = 0
    samples: int | None = None
    q: int | None = None
    l: int | None = None
    out_format: str = "json"
    out_path: str | None = None
    p_subset: tuple[int, ...] = ()
    h: tuple | None = None
    x: tuple | None = None
    batch: str | None = None
    theta_lambda: str | None = None
    theta_mu: str | None = None
    sweep: bool = False
    group: str = "SL2"
    suite: str = "all"


# -- parsing helpers -----------------------------------------------------------


def parse_rational(text: str) -> Fraction:
    """ "3/7", "-2", "5/1" — exact, no floats.

    >>> parse_rational("-3/6")
    Fraction(-1, 2)
    """
    return Fraction(text.strip())


def parse_vector(text: str):
    """Comma-separated rationals; the empty string is the empty tuple."""
    text = text.strip()
    if not text:
        return ()
    return tuple(parse_rational(part) for part in text.split(","))


def parse_subset(text: str) -> tuple[int, ...]:
    """1-based comma-separated simple-root indices -> 0-based sorted tuple."""
    vals = parse_vector(text)
    out = []
    for v in vals:
        if v.denominator != 1 or v < 1:
            raise ValueError(f"subset entries must be positive integers: {text!r}")
        out.append(int(v) - 1)
    return tuple(sorted(set(out)))


def fmt_vector(v) -> list[str]:
    return [fmt_rational(x) for x in v]


# -- output --------------------------------------------------------------------


def _emit(payload, config: RunConfig) -> None:
    if config.out_format == "csv":
        text = _to_csv(payload)
    else:
        text = json.dumps(payload, indent=2) + "\n"
    if config.out_path:
        with open(config.out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _to_csv(payload) -> str:
    """Flatten the payload's row list (or the payload itself) to CSV."""
    rows = payload
    if isinstance(payload, dict):
        for key in ("records", "rows", "positive_roots", "elements"):
            if key in payload:
                rows = payload[key]
                break
        else:
            rows = [payload]
    buf = io.StringIO()
    if not rows:
        return ""
    header = list(rows[0])
    writer = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _csv_cell(v) for k, v in row.items()})
    return buf.getvalue()


def _csv_cell(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (list, tuple)):
        return ";".join(str(x) for x in v)
    return str(v)


# -- subcommands -----------------------------------------------------------


class ConfigError(ValueError):
    """An invalid configuration: reported with exit status 2."""


def _datum(label):
    """A bad type label is a configuration problem, not a module failure."""
    try:
        return build_root_datum(label)
    except CartanMatrixError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_roots(config: RunConfig) -> int:
    datum = _datum(config.ctype)
    rows = [{"index": r.index + 1,
             "coords": [int(c) for c in r.coords],
             "covector": [int(c) for c in r.cov],
             "coroot": [int(c) for c in r.coroot],
             "reduced": r.reduced}
            for r in datum.positive_roots()]
    _emit({"type": datum.label, "rank_ss": datum.rank_ss,
           "rank_central": datum.rank_central,
           "positive_roots": rows}, config)
    return 0


def cmd_weyl(config: RunConfig) -> int:
    datum = _datum(config.ctype)
    weyl = datum.weyl
    elements = sorted(
        ({"word": "".join(str(i + 1) for i in w.word) or "e",
          "length": w.length} for w in weyl.elements),
        key=lambda e: (e["length"], e["word"]))
    _emit({"type": datum.label, "order": weyl.order,
           "longest_length": elements[-1]["length"],
           "elements": elements}, config)
    return 0


def cmd_refine(config: RunConfig) -> int:
    datum = _datum(config.ctype)
    cp = random_polyhedron(datum, random.Random(f"cli:{config.ctype}:{config.seed}"))
    refinement = canonical_refinement(cp)
    table = []
    for facet in enumerate_semistandard(datum):
        table.append({
            "subset": [i + 1 for i in facet.subset],
            "rep": "".join(str(i + 1) for i in facet.rep.word) or "e",
            "degree": fmt_rational(degree(cp, facet)),
        })
    table.sort(key=lambda row: (len(row["subset"]), row["subset"], row["rep"]))
    _emit({
        "type": datum.label,
        "seed": config.seed,
        "polyhedron": {k: fmt_vector(v) for k, v in sorted(cp.to_mapping().items())},
        "refinement": {
            "subset": [i + 1 for i in refinement.subset],
            "rep": "".join(str(i + 1) for i in refinement.rep.word) or "e",
        },
        "degrees": table,
    }, config)
    return 0


def _gamma_points(config: RunConfig, dim: int):
    if config.batch:
        with open(config.batch, newline="", encoding="utf-8") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                if len(row) != 2 * dim:
                    raise ValueError(
                        f"batch rows need {2 * dim} entries (H then X), "
                        f"got {len(row)}")
                vals = [parse_rational(c) for c in row]
                yield tuple(vals[:dim]), tuple(vals[dim:])
    else:
        if config.h is None or config.x is None:
            raise ConfigError("gamma needs --H and --X (or --batch)")
        yield config.h, config.x


def cmd_gamma(config: RunConfig) -> int:
    datum = _datum(config.ctype)
    ctx = TruncationContext(datum)
    rows = []
    for h, x in _gamma_points(config, datum.dim):
        if len(h) != datum.dim or len(x) != datum.dim:
            raise ConfigError(f"H and X must have {datum.dim} coordinates")
        rows.append({"H": fmt_vector(h), "X": fmt_vector(x),
                     "gamma": ctx.gamma(config.p_subset, h, x)})
    payload = rows[0] if not config.batch else {"rows": rows}
    _emit(payload, config)
    return 0


def cmd_qpsum(config: RunConfig) -> int:
    datum = _datum(config.ctype)
    if config.q is None:
        raise ConfigError("qpsum needs --q")
    if not is_prime_power(config.q):
        raise ConfigError(f"q must be a prime power, got {config.q}")
    spec = standard_lattice_spec(datum, config.p_subset)
    points = []
    if config.batch:
        with open(config.batch, newline="", encoding="utf-8") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                points.append(tuple(parse_rational(c) for c in row))
    else:
        if config.x is None:
            raise ConfigError("qpsum needs --X (or --batch)")
        points.append(config.x)
    rows = []
    all_equal = True
    for x in points:
        if len(x) != datum.dim:
            raise ConfigError(f"X must have {datum.dim} coordinates")
        b = brute_sum(spec, x)
        p = product_eval(spec, x, config.q)
        equal = b == p
        all_equal = all_equal and equal
        rows.append({"X": fmt_vector(x), "brute": fmt_rational(b),
                     "product": fmt_rational(p), "equal": equal})
    payload = rows[0] if not config.batch else {"rows": rows}
    _emit(payload, config)
    return 0 if all_equal else 1


def _orbit_min(k: int, q: int, l: int, m: int) -> int:
    return min(k * pow(q, i, m) % m for i in range(l))


def _sll_row(torus, ka: int, kb: int) -> dict:
    ta, tb = torus.character(ka), torus.character(kb)
    gp = general_position(ta) and general_position(tb)
    row = {"k_lambda": ka, "k_mu": kb,
           "general_position": gp,
           "central_ok": central_character_ok(ta, tb),
           "contragredient": contragredient_test(ta, tb),
           "char_sum": "", "J": ""}
    if gp:
        row["char_sum"] = char_sum_regular(ta, tb)
        row["J"] = fmt_rational(assemble_J(ta, tb))
    return row


def cmd_slltrace(config: RunConfig) -> int:
    if config.q is None or config.l is None:
        raise ConfigError("slltrace needs --q and --l")
    try:
        torus = build_torus(config.q, config.l)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if config.sweep:
        reps = sorted({_orbit_min(k, torus.q, torus.l, torus.m)
                       for k in range(torus.m)
                       if general_position(torus.character(k))})
        rows = [_sll_row(torus, ka, kb)
                for ka in reps for kb in reps]
        _emit({"q": torus.q, "l": torus.l, "m": torus.m, "z": torus.z,
               "rows": rows}, config)
        return 0
    if config.theta_lambda is None or config.theta_mu is None:
        raise ConfigError("slltrace needs --theta-lambda and --theta-mu "
                          "(or --sweep)")
    row = _sll_row(torus, int(config.theta_lambda) % torus.m,
                   int(config.theta_mu) % torus.m)
    _emit(row, config)
    return 0


def cmd_filtercheck(config: RunConfig) -> int:
    group = config.group.upper()
    if not group.startswith("SL") or not group[2:].isdigit():
        raise ConfigError(f"unsupported group {config.group!r} (expected SLn)")
    n = int(group[2:])
    if config.q is None:
        raise ConfigError("filtercheck needs --q")
    if not is_prime_power(config.q):
        raise ConfigError(f"q must be a prime power, got {config.q}")
    if config.theta_lambda is None or config.theta_mu is None:
        raise ConfigError("filtercheck needs --theta-lambda and --theta-mu")

    def exps(text):
        vals = parse_vector(text)
        if len(vals) == 1 and n == 2:
            vals = (vals[0], Fraction(0))
        if len(vals) != n or any(v.denominator != 1 for v in vals):
            raise ConfigError(f"need {n} integer exponents, got {text!r}")
        return tuple(int(v) for v in vals)

    el, em = exps(config.theta_lambda), exps(config.theta_mu)
    verdict = cuspidal_filter_check(n, config.q, el, em)
    _emit({"group": group, "q": config.q,
           "theta_lambda": list(el), "theta_mu": list(em),
           "pass": verdict}, config)
    return 0


def cmd_verify(config: RunConfig) -> int:
    if config.suite != "all" and config.suite not in SUITES:
        raise ConfigError(f"unknown suite {config.suite!r}; choose from "
                          f"{', '.join(sorted(SUITES))} or all")
    types = None
    if config.ctype:
        types = [t.strip() for t in config.ctype.split(",") if t.strip()]
        for t in types:
            _datum(t)  # validates the label up front
    records = run_suites(None if config.suite == "all" else [config.suite],
                         seed=config.seed, samples=config.samples,
                         types=types)
    payload = {"suite": config.suite,
               "ok": all(r.ok for r in records),
               "records": [r.as_dict() for r in records]}
    _emit(payload, config)
    return 0 if payload["ok"] else 1


# -- argument plumbing -----------------------------------------------------


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="trunca",
        description="Exact truncation combinatorics: root systems, "
                    "refinements, lattice sums, torus character sweeps.")
    sub = parser.add_subparsers(dest="command", required=True)
    by_name = {}

    def add(name, help_text, **kwargs):
        p = sub.add_parser(name, help=help_text, **kwargs)
        p.add_argument("--config", help="JSON file of flag defaults")
        p.add_argument("--format", dest="out_format", choices=("json", "csv"),
                       default="json", help="output format")
        p.add_argument("--out", dest="out_path", help="write output to a file")
        by_name[name] = p
        return p

    p = add("roots", "positive roots of a Cartan type")
    p.add_argument("--type", dest="ctype", required=True)

    p = add("weyl", "Weyl group elements and reduced words")
    p.add_argument("--type", dest="ctype", required=True)

    p = add("refine", "refine a seeded random polyhedron")
    p.add_argument("--type", dest="ctype", required=True)
    p.add_argument("--seed", type=int, default=0)

    p = add("gamma", "evaluate the truncation gamma function")
    p.add_argument("--type", dest="ctype", required=True)
    p.add_argument("--P", dest="p_subset", default="",
                   help="1-based simple indices of the parabolic; empty = Borel")
    p.add_argument("--H", dest="h", help="comma-separated rational coordinates")
    p.add_argument("--X", dest="x", help="comma-separated rational coordinates")
    p.add_argument("--batch", help="CSV of rows with H then X coordinates")

    p = add("qpsum", "lattice sum vs geometric-series product")
    p.add_argument("--type", dest="ctype", required=True)
    p.add_argument("--P", dest="p_subset", default="",
                   help="1-based simple indices of the parabolic; empty = Borel")
    p.add_argument("--q", type=int, help="prime power")
    p.add_argument("--X", dest="x", help="comma-separated rational coordinates")
    p.add_argument("--batch", help="CSV of X rows")

    p = add("slltrace", "norm-one torus character table")
    p.add_argument("--q", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--theta-lambda", dest="theta_lambda",
                   help="character exponent")
    p.add_argument("--theta-mu", dest="theta_mu", help="character exponent")
    p.add_argument("--sweep", action="store_true",
                   help="all orbit representatives in general position")

    p = add("filtercheck", "split-torus cuspidal filter")
    p.add_argument("--group", default="SL2")
    p.add_argument("--q", type=int)
    p.add_argument("--theta-lambda", dest="theta_lambda",
                   help="comma-separated exponents")
    p.add_argument("--theta-mu", dest="theta_mu",
                   help="comma-separated exponents")

    p = add("verify", "run acceptance suites")
    p.add_argument("--suite", default="all",
                   help="suite name or 'all' (default)")
    p.add_argument("--type", dest="ctype",
                   help="restrict type-ranging suites to these labels "
                        "(comma-separated)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int,
                   help="override per-suite sample counts (smoke runs)")

    return parser, by_name


COMMANDS = {
    "roots": cmd_roots,
    "weyl": cmd_weyl,
    "refine": cmd_refine,
    "gamma": cmd_gamma,
    "qpsum": cmd_qpsum,
    "slltrace": cmd_slltrace,
    "filtercheck": cmd_filtercheck,
    "verify": cmd_verify,
}


def _load_config(parser_for_cmd, argv, ns):
    """Apply --config file values as defaults and re-parse so explicit
    flags keep priority."""
    with open(ns.config, encoding="utf-8") as fh:
        values = json.load(fh)
    if not isinstance(values, dict):
        raise ConfigError("config file must hold a JSON object")
    known = {a.dest for a in parser_for_cmd._actions}
    unknown = set(values) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    parser_for_cmd.set_defaults(**values)
    merged = parser_for_cmd.parse_args(argv[1:])
    merged.command = ns.command
    return merged


def _to_config(ns) -> RunConfig:
    kwargs = {}
    for f in fields(RunConfig):
        if hasattr(ns, f.name):
            kwargs[f.name] = getattr(ns, f.name)
    config = RunConfig(**kwargs)
    if isinstance(config.p_subset, str):
        config.p_subset = parse_subset(config.p_subset)
    if isinstance(config.h, str):
        config.h = parse_vector(config.h)
    if isinstance(config.x, str):
        config.x = parse_vector(config.x)
    return config


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, by_name = _build_parser()
    try:
        ns = parser.parse_args(argv)
        if getattr(ns, "config", None):
            ns = _load_config(by_name[ns.command], argv, ns)
        config = _to_config(ns)
    except ConfigError as exc:
        print(f"trunca: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"trunca: invalid configuration: {exc}", file=sys.stderr)
        return 2

    try:
        return COMMANDS[config.command](config)
    except ConfigError as exc:
        print(f"trunca: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ConsistencyError, OSError) as exc:
        print(f"trunca: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
