"""Command-line front end: ``hecke <command> [options]``.

Results go to stdout as canonical JSON (sorted keys, canonical support
order) and are only printed once fully computed.  Run statistics go to
stderr.  Exit codes: 0 ok, 1 verification failure, 2 usage, 3 parse,
4 budget, 5 precision, 6 depth, 7 structural, 8 context mismatch.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .classical import HeckeElem0, LeviDescriptor, convolve0, satake0
from .derived import HeckeElem1, cell_with_height, convolve_mixed, derived_satake1
from .errors import ContextMismatch, HeckeError, ParseError, StructuralError
from .root_datum import RootDatum
from .session import RunConfig, Session
from .verify import SUITES, run_suite

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2

CONFIG_FLAGS = ("group", "p", "a", "precision", "budget", "depth_max", "cache_dir", "seed", "format")


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


# ----- input parsing -----------------------------------------------------------------------------


def _read_json(text: str):
    """Inline JSON, ``@path`` for a file, or ``-`` for stdin."""
    try:
        if text == "-":
            raw = sys.stdin.read()
        elif text.startswith("@"):
            raw = Path(text[1:]).read_text()
        else:
            raw = text
    except OSError as exc:
        raise ParseError(f"cannot read {text!r}: {exc}") from exc
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc


def _parse_cochar(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").strip("[]()").split(",") if x != "")
    except ValueError as exc:
        raise ParseError(f"bad cocharacter {text!r}") from exc


def _check_header(obj: dict, datum: RootDatum, p: int) -> None:
    if not isinstance(obj, dict) or "support" not in obj:
        raise ParseError("element JSON must be an object with a 'support' list")
    g = obj.get("group")
    if g is not None:
        if not isinstance(g, dict) or (g.get("family"), g.get("n")) != (datum.family, datum.n):
            raise ContextMismatch(f"element is over {g}, run is over {datum.name}")
    if "p" in obj and obj["p"] != p:
        raise ContextMismatch(f"element is over p = {obj['p']}, run uses p = {p}")


def _basis(make, *args):
    """Build a basis element from command-line values; bad values are parse errors."""
    try:
        return make(*args)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def load_element(text: str, cfg: RunConfig):
    obj = _read_json(text)
    datum = cfg.datum
    _check_header(obj, datum, cfg.p)
    if obj.get("degree", 0) == 1:
        if "a" in obj and obj["a"] != cfg.a:
            raise ContextMismatch(f"element is over a = {obj['a']}, run uses a = {cfg.a}")
        return HeckeElem1.from_json(obj, datum, cfg.p, cfg.a)
    return HeckeElem0.from_json(obj, datum, cfg.p, cfg.a)


# ----- commands ------------------------------------------------------------------------------------


def cmd_satake0(args, session: Session):
    cfg = session.config
    if args.element is not None:
        F = load_element(args.element, cfg)
        if isinstance(F, HeckeElem1):
            raise ParseError("satake0 takes a degree-zero element; use satake1")
    elif args.cell is not None:
        F = _basis(HeckeElem0.basis, cfg.datum, cfg.p, _parse_cochar(args.cell), cfg.a)
    else:
        raise ParseError("give --element or --cell")
    levi = LeviDescriptor.parse(args.levi, cfg.datum.n) if args.levi else None
    return satake0(F, levi, session).to_json()


def _mu_box(datum: RootDatum, box: int) -> list:
    if datum.family == "PGL":
        return [(k, 0) for k in range(-box, box + 1)]
    return [(k,) for k in range(-(box // 2), box // 2 + 1)]


def cmd_satake1(args, session: Session):
    cfg = session.config
    datum = cfg.datum
    if args.element is not None:
        F = load_element(args.element, cfg)
        if not isinstance(F, HeckeElem1):
            raise ParseError("satake1 takes a degree-one element")
    elif args.f_cell is not None:
        F = _basis(lambda: HeckeElem1.basis(datum, cfg.p, cfg.a, cell_with_height(datum, args.f_cell)))
    else:
        raise ParseError("give --element or --f-cell")
    prov: list = []
    targets = _mu_box(datum, args.mu_box) if args.mu_box is not None else None
    res = derived_satake1(F, targets=targets, session=session, provenance=prov)
    return {"result": res.to_json(), "provenance": [p.to_json() for p in prov]}


def cmd_convolve(args, session: Session):
    cfg = session.config
    X = load_element(args.left, cfg)
    Y = load_element(args.right, cfg)
    if isinstance(X, HeckeElem0) and isinstance(Y, HeckeElem0):
        return convolve0(X, Y, session).to_json()
    if isinstance(X, HeckeElem0):
        return convolve_mixed(X, Y, "left", session=session).to_json()
    if isinstance(Y, HeckeElem0):
        return convolve_mixed(Y, X, "right", session=session).to_json()
    raise StructuralError("products of two degree-one classes land in degree two, which is not implemented")


def cmd_table(args, session: Session):
    cfg = session.config
    datum = cfg.datum
    rows = []
    for lam in datum.antidominant_box(args.height):
        img = satake0(HeckeElem0.basis(datum, cfg.p, lam, cfg.a), session=session)
        rows.append({"cochar": list(lam), "image": img.to_json()["support"]})
    return {"group": datum.to_json(), "p": cfg.p, "a": cfg.a, "height": args.height, "rows": rows}


def cmd_verify(args, session: Session):
    report = run_suite(args.suite, session)
    return report.to_json(timing=args.timing), (EXIT_OK if report.passed else EXIT_VERIFY_FAILED)


def cmd_cache(args, session: Session):
    if session.cache is None:
        raise ParseError("no cache directory configured (use --cache-dir or HECKE_CACHE_DIR)")
    if args.action == "inspect":
        return {"records": session.cache.inspect(), "corrupted": session.cache.corrupted}
    session.cache.clear()
    return {"cleared": True}


# ----- table rendering -----------------------------------------------------------------------------


def render_table(obj) -> str:
    """Plain-text view of a result for --format table."""
    lines = []
    if "rows" in obj and isinstance(obj["rows"], list) and obj["rows"] and "image" in obj["rows"][0]:
        for r in obj["rows"]:
            img = " + ".join(f"{t['coeff']}*{t['cochar']}" for t in r["image"]) or "0"
            lines.append(f"T{r['cochar']}\t{img}")
    elif "checks" in obj:
        for c in obj["checks"]:
            lines.append(f"{c['status'].upper()}\t{c['name']}")
        lines.append(f"{obj['suite']}: {obj['n_checks'] - obj['n_failed']}/{obj['n_checks']} passed")
    elif "result" in obj:
        return render_table(obj["result"])
    elif "support" in obj:
        for t in obj["support"]:
            w = f" ^{t['wedge']}" if t.get("wedge") else ""
            lines.append(f"{t['cochar']}{w}\t{t['coeff']}")
        if not obj["support"]:
            lines.append("0")
    else:
        return dumps(obj)
    return "\n".join(lines)


# ----- argument parsing ----------------------------------------------------------------------------


def _common(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("run configuration (flags override HECKE_* environment variables)")
    g.add_argument("--group", help="GLn, PGLn or SLn (default PGL2)")
    g.add_argument("--p", type=int, help="prime >= 5 (default 5)")
    g.add_argument("--a", type=int, help="coefficients in Z/p^a (default 1)")
    g.add_argument("--precision", type=int, help="working p-adic precision N (default 24)")
    g.add_argument("--budget", type=int, help="maximum enumeration nodes")
    g.add_argument("--depth-max", dest="depth_max", type=int, help="largest coset depth (default 16)")
    g.add_argument("--cache-dir", dest="cache_dir", help="directory of the enumeration cache")
    g.add_argument("--seed", type=int, help="seed for randomized suites (default 0)")
    g.add_argument("--format", choices=("json", "table"), help="output format (default json)")
    g.add_argument("--verify-depth", dest="verify_depth", action="store_true", default=None,
                   help="recount every fiber one level deeper and fail on a change")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hecke", description="Satake transforms of (derived) Hecke algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    p0 = sub.add_parser("satake0", help="degree-zero Satake transform")
    p0.add_argument("--element", "--elem", dest="element", help="element JSON, @file or - for stdin")
    p0.add_argument("--cell", help="basis element T_lam, e.g. -2,0")
    p0.add_argument("--levi", help="target Levi block sizes, e.g. 2,1 (default: the torus)")
    _common(p0)
    p0.set_defaults(func=cmd_satake0)

    p1 = sub.add_parser("satake1", help="degree-one derived Satake transform (PGL2, SL2)")
    p1.add_argument("--element", "--elem", dest="element", help="degree-one element JSON, @file or - for stdin")
    p1.add_argument("--f-cell", dest="f_cell", type=int, help="basis element f_n with -<lam, alpha> = n")
    p1.add_argument("--mu-box", dest="mu_box", type=int, help="evaluate at every mu with |<mu, alpha>| <= box")
    _common(p1)
    p1.set_defaults(func=cmd_satake1)

    pc = sub.add_parser("convolve", help="convolution product (degrees 0*0, 0*1, 1*0)")
    pc.add_argument("--left", required=True, help="element JSON, @file or -")
    pc.add_argument("--right", required=True, help="element JSON, @file or -")
    _common(pc)
    pc.set_defaults(func=cmd_convolve)

    pt = sub.add_parser("table", help="Satake images of every basis element in an antidominant box")
    pt.add_argument("--height", type=int, default=3)
    _common(pt)
    pt.set_defaults(func=cmd_table)

    pv = sub.add_parser("verify", help="run a verification suite")
    pv.add_argument("suite", choices=SUITES)
    pv.add_argument("--timing", action="store_true", help="include wall time (output is then not reproducible)")
    _common(pv)
    pv.set_defaults(func=cmd_verify)

    pk = sub.add_parser("cache", help="inspect or clear the enumeration cache")
    pk.add_argument("action", choices=("inspect", "clear"))
    _common(pk)
    pk.set_defaults(func=cmd_cache)
    return parser


def config_from(args, environ=None) -> RunConfig:
    values = RunConfig.env_overrides(environ)
    for key in CONFIG_FLAGS + ("verify_depth",):
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    try:
        return RunConfig(**values)
    except TypeError as exc:
        raise ParseError(str(exc)) from exc


def main(argv=None, environ=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="hecke: %(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from(args, environ)
        session = Session.open(cfg)
        out = args.func(args, session)
        code = EXIT_OK
        if isinstance(out, tuple):
            out, code = out
        text = render_table(out) if cfg.format == "table" else dumps(out)
    except HeckeError as exc:
        print(f"hecke: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    sys.stdout.write(text + "\n")
    sys.stdout.flush()
    print(json.dumps({"stats": session.stats}, sort_keys=True), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
