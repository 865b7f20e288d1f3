"""Command line entry point: `grastor {gamma,verify,groups,semitable,classify}`.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 precondition violation.  JSON is emitted with sorted keys so output is
byte-identical for a fixed configuration.
"""
import argparse
import json
import os
import sys

from . import classical as cl
from . import exactlinalg as el
from . import forms as fm
from . import geometry as geo
from .errors import GrastorError, ParseError, PreconditionError
from .scalars import make_ring
from .verify import SUITES, RunConfig, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PRECONDITION = 0, 1, 2, 3


def _load_json(text):
    """Inline JSON, a path to a JSON file, or '-' for stdin."""
    if text == "-":
        text = sys.stdin.read()
    elif os.path.exists(text):
        with open(text) as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed JSON: {e}") from None


def _dump(obj, out):
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    _write(text, out)


def _write(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _ring(args):
    return make_ring(args.p, args.ext)


def _parse_matrix(ring, spec, n):
    if spec in (None, "identity"):
        return ring.eye(n)
    if spec == "zero":
        return ring.zeros(n, n)
    obj = _load_json(spec)
    if not isinstance(obj, list):
        raise ParseError("--A must be a matrix, 'identity' or 'zero'")
    return ring.array(obj)


def _parse_form(ring, spec, n):
    if spec in fm.FAMILIES:
        if n % 2:
            raise PreconditionError("standard forms need an even ambient dimension")
        return fm.standard_form(ring, spec, n // 2)
    return fm.FormDescriptor.from_json(_load_json(spec), ring)


def _subspace(obj, ring):
    try:
        return el.Subspace.from_json(obj, ring)
    except (KeyError, TypeError) as e:
        raise ParseError(f"malformed subspace: {e}") from None


# ---------------------------------------------------------------- commands

def cmd_gamma(args):
    obj = _load_json(args.input)
    if not isinstance(obj, dict):
        raise ParseError("gamma input must be a JSON object")
    default = make_ring(args.p, args.ext)
    pts = {}
    for k in "xaybz":
        if not isinstance(obj.get(k), dict):
            raise ParseError(f"missing or malformed {k!r}")
        pts[k] = _subspace(obj[k], None if "ring" in obj[k] else default)
    mode = obj.get("mode", args.mode or "global")
    t = [pts[k] for k in "xaybz"]
    fns = {"global": geo.gamma_global, "restricted": geo.gamma_restricted, "oracle": geo.gamma_oracle}
    if mode == "all":
        res = {m: f(*t).to_json() for m, f in fns.items() if m != "restricted" or geo.is_admissible(*t)}
        vals = list(res.values())
        _dump({"mode": "all", "results": res, "agree": all(v == vals[0] for v in vals)}, args.out)
        return EXIT_OK if all(v == vals[0] for v in vals) else EXIT_FAIL
    if mode not in fns:
        raise ParseError(f"unknown mode {mode!r}")
    _dump({"mode": mode, "result": fns[mode](*t).to_json()}, args.out)
    return EXIT_OK


def cmd_verify(args):
    mode = args.mode or "global"
    cfg = RunConfig(p=args.p, ext=args.ext, n=args.n, form=args.form, family=args.family, A=args.A,
                    mode=mode, samples=args.samples, seed=args.seed,
                    exhaustive=True if args.exhaustive else None, limit=args.limit, workers=args.workers)
    if args.form not in fm.FAMILIES:
        cfg.form = _parse_form(make_ring(args.p, args.ext), args.form, args.n)
    report = run_suite(args.suite, cfg)
    _dump(report.to_json(), args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_groups(args):
    ring = _ring(args)
    A = _parse_matrix(ring, args.A, args.n)
    spec = cl.HomotopeGroupSpec(args.family, A, ring)
    g = cl.enumerate_group(spec, args.limit)
    if args.format == "csv":
        _write(g.to_csv(), args.out)
        return EXIT_OK
    out = {"family": args.family, "ring": ring.name, "A": [[ring.format(v) for v in r] for r in A],
           "order": len(g), "is_group": g.is_group(), "unit": g.unit,
           "table": g.table.tolist(), "legend": g.legend()}
    if args.family != "gl_rect" and el.is_invertible_matrix(ring, A):
        out["oracle_order"] = len(cl.oracle_group_elements(spec, args.limit))
    if args.hull:
        h = cl.semigroup_hull(spec, args.limit)
        out["hull"] = {"size": len(h), "closed": h.is_closed(), "associative": h.is_associative()}
    _dump(out, args.out)
    return EXIT_OK


def cmd_semitable(args):
    ring = _ring(args)
    form = _parse_form(ring, args.form, args.n)
    tau = fm.InvolutionMap.orthocomplement(form)
    a = _subspace(_load_json(args.a), ring) if args.a else tau.fixed_points(
        el.enumerate_subspaces(args.n, ring, limit=args.limit))[0]
    Y = fm.enumerate_lagrangians(form)
    idx = {y: i for i, y in enumerate(Y)}
    ta = tau(a)
    rows, closed = [], True
    for j, y in enumerate(Y):
        for i, x in enumerate(Y):
            for k, z in enumerate(Y):
                r = idx.get(geo.gamma_global(x, a, y, ta, z), -1)
                closed &= r >= 0
                rows.append((j, i, k, r))
    legend = [y.to_json()["basis"] for y in Y]
    if args.format == "csv":
        lines = ["y,x,z,gamma"] + [",".join(map(str, r)) for r in rows]
        lines += ["", "index,basis"] + [f'{i},"{b}"' for i, b in enumerate(legend)]
        _write("\n".join(lines) + "\n", args.out)
    else:
        _dump({"a": a.to_json(), "tau_a": ta.to_json(), "lagrangians": len(Y), "closed": bool(closed),
               "table": [list(r) for r in rows], "legend": legend}, args.out)
    return EXIT_OK if closed else EXIT_FAIL


def cmd_classify(args):
    ring = _ring(args)
    rep = cl.classify_orbits(args.family, args.n, ring, scalars=args.scalars, limit=args.limit)
    fmt = ring.format
    orbits = [{"representative": [[fmt(v) for v in r] for r in e["representative"]], "size": e["size"],
               "rank": int(e["rank"]), "group_order": e["group_order"]} for e in rep]
    _dump({"family": args.family, "ring": ring.name, "n": args.n, "scalars": args.scalars,
           "orbit_count": len(orbits), "orbits": orbits}, args.out)
    return EXIT_OK


# ---------------------------------------------------------------- parser

def _common(p):
    p.add_argument("--p", type=int, default=2, help="characteristic; 0 means the rationals")
    p.add_argument("--ext", action="store_true", help="use the quadratic extension GF(p^2)")
    p.add_argument("--n", type=int, default=2, help="ambient dimension (matrix size for groups/classify)")
    p.add_argument("--limit", type=int, default=None, help="cardinality cap (default: GRASTOR_LIMIT or 10^6)")
    p.add_argument("--out", default=None, help="write output to a file")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser():
    parser = argparse.ArgumentParser(prog="grastor", description="Exact associative geometry of Grassmannians")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gamma", help="evaluate Gamma on a JSON tuple")
    _common(g)
    g.add_argument("input", help="JSON object {x,a,y,b,z[,mode]}, a file, or '-'")
    g.add_argument("--mode", choices=("global", "restricted", "oracle", "all"), default=None)
    g.set_defaults(func=cmd_gamma)

    v = sub.add_parser("verify", help="run a verification suite")
    _common(v)
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--form", default="symplectic", help="symplectic, hyperbolic, signature or a JSON file")
    v.add_argument("--family", default="orthogonal")
    v.add_argument("--A", default=None)
    v.add_argument("--mode", choices=("global", "oracle", "middle", "vectorset"), default=None)
    v.add_argument("--samples", type=int, default=1000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--exhaustive", action="store_true")
    v.add_argument("--workers", type=int, default=1, help="accepted for compatibility; runs are sequential")
    v.set_defaults(func=cmd_verify)

    gr = sub.add_parser("groups", help="enumerate a homotope group")
    _common(gr)
    gr.add_argument("--family", choices=cl.FAMILIES, default="orthogonal")
    gr.add_argument("--A", default="identity", help="'identity', 'zero', inline JSON matrix or a file")
    gr.add_argument("--hull", action="store_true", help="also report the semigroup hull")
    gr.set_defaults(func=cmd_groups)

    s = sub.add_parser("semitable", help="Lagrangian semitorsor table for a fixed a")
    _common(s)
    s.add_argument("--form", default="symplectic")
    s.add_argument("--a", default=None, help="subspace JSON; default the first Lagrangian")
    s.set_defaults(func=cmd_semitable)

    c = sub.add_parser("classify", help="orbits of homotope parameters")
    _common(c)
    c.add_argument("--family", choices=sorted(cl.ORBIT_FAMILIES), default="sym")
    c.add_argument("--scalars", action="store_true", help="also identify A with unit multiples")
    c.set_defaults(func=cmd_classify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except GrastorError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
