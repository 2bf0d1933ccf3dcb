"""
Command-line entry point.

Exit status: 0 on success or PASS, 1 on a theorem FAIL or an axiom violation,
2 on usage, parse or precondition errors.  Reports go to standard output (or
``--out``); diagnostics always go to standard error.
"""

from __future__ import annotations

import argparse
import os
import sys

from ..bridge import check_category_unitalization
from ..dycomplex import DEFAULT_CAP, cochain_map_matrix, get_complex, induced_map_on_cohomology
from ..envelopes import (EXHAUSTIVE_LIMIT, additive_pool, default_samples, karoubi_pool,
                         verify_envelope_invariance)
from ..errors import DYError
from ..hochschild import (HOCH_CAP, check_algebra_unitalization, hoch_cohomology, hoch_differential,
                          is_coboundary, normalize_cocycle, validate_algebra, validate_bimodule)
from ..presentations import unitalize_category, validate_category, validate_functor
from ..reports import TheoremReport
from . import writer
from .parser import ParseError, try_parse
from .report import dumps, envelope

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _color(text, code):
    if os.environ.get("NO_COLOR") is not None or not sys.stderr.isatty():
        return text
    return f"\033[{code}m{text}\033[0m"


def diag(message, kind="error"):
    code = "31" if kind == "error" else "33"
    print(f"{_color(kind, code)}: {message}", file=sys.stderr)


def _read(path):
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load(path, env=None):
    data = _read(path)
    f, diags = try_parse(data, env)
    if diags:
        for d in diags:
            print(d.format(path), file=sys.stderr)
        raise ParseError(diags)
    return f, data


def _one(mapping, name, what, flag):
    if name is not None:
        if name not in mapping:
            raise UsageError(f"no {what} named {name!r}")
        return mapping[name]
    if len(mapping) != 1:
        raise UsageError(f"the file declares {len(mapping)} {what}s; choose one with {flag}")
    return next(iter(mapping.values()))


# -- subcommands ----------------------------------------------------------------


def cmd_validate(args, pf):
    reports = []
    for c in pf.categories.values():
        reports.append(validate_category(c))
    for f in pf.functors.values():
        reports.append(validate_functor(f))
    for a in pf.algebras.values():
        reports.append(validate_algebra(a))
    for m in pf.bimodules.values():
        reports.append(validate_bimodule(m))
    ok = all(r.ok for r in reports)
    for r in reports:
        for v in r.violations:
            diag(f"{r.kind} {r.subject}: {v.axiom} fails at objects ({', '.join(v.objects)})"
                 f" morphisms ({', '.join(v.morphisms)})", "violation")
    result = {"reports": [r.to_json() for r in reports]}
    return result, "PASS" if ok else "FAIL", {}


def cmd_dy(args, pf):
    f = pf.functor(args.functor)
    if f is None:
        raise UsageError(f"no functor named {args.functor!r}")
    cx = get_complex(f, args.cap)
    rows = []
    for n in range(1, args.max_degree + 1):
        rows.append(cx.cohomology(n).to_json())
    table = [{"degree": r["degree"], "dim_cochains": r["dim_cochains"], "dim_H": r["dim_H"]} for r in rows]
    return ({"functor": f.name, "field": str(f.source.field), "table": table, "entries": rows}, None,
            {"functor": args.functor, "max_degree": args.max_degree, "cap": args.cap})


def cmd_hochschild(args, pf):
    m = _one(pf.bimodules, args.bimodule, "bimodule", "--bimodule")
    if args.algebra is not None and pf.algebras.get(args.algebra) is not m.algebra:
        raise UsageError(f"bimodule {m.name!r} is not over algebra {args.algebra!r}")
    rows = [hoch_cohomology(m, n, cap=args.cap).to_json() for n in range(args.max_degree + 1)]
    table = [{"degree": r["degree"], "dim_cochains": r["dim_cochains"], "dim_H": r["dim_H"]} for r in rows]
    return ({"algebra": m.algebra.name, "bimodule": m.name, "field": str(m.field), "table": table,
             "entries": rows}, None,
            {"algebra": args.algebra, "bimodule": m.name, "max_degree": args.max_degree, "cap": args.cap})


def cmd_unitalize(args, pf):
    if args.category is not None and args.algebra is not None:
        raise UsageError("give only one of --category or --algebra")
    use_category = args.category is not None
    if args.category is None and args.algebra is None:
        # a file with exactly one category or exactly one algebra needs no flag
        if len(pf.categories) + len(pf.algebras) != 1:
            raise UsageError("the file declares several structures; choose one with --category or --algebra")
        use_category = bool(pf.categories)
    if use_category:
        c = _one(pf.categories, args.category, "category", "--category")
        cu = unitalize_category(c)
        return writer.write_file(c.field, [writer.write_category(cu)])
    from ..hochschild import extend_bimodule, unitalize_algebra

    a = _one(pf.algebras, args.algebra, "algebra", "--algebra")
    au = unitalize_algebra(a)
    blocks = [writer.write_algebra(au)]
    if args.bimodule is not None:
        m = _one(pf.bimodules, args.bimodule, "bimodule", "--bimodule")
        if m.algebra is not a:
            raise UsageError(f"bimodule {m.name!r} is not over algebra {a.name!r}")
        blocks.append(writer.write_bimodule(extend_bimodule(m, au), algebra_name=au.name))
    return writer.write_file(a.field, blocks)


def cmd_normalize(args, pf, cocycle_blob):
    before = set(pf.cochains)
    pf2, _ = cocycle_blob
    new = [n for n in pf2.cochains if n not in before] or list(pf2.cochains)
    if args.name is not None:
        if args.name not in pf2.cochains:
            raise UsageError(f"no cochain named {args.name!r}")
        new = [args.name]
    if len(new) != 1:
        raise UsageError("the cocycle file must declare exactly one cochain (or pass --name)")
    f = pf2.cochains[new[0]]
    m = f.module
    res = normalize_cocycle(m, f)
    ok, _ = is_coboundary(m, res.corrected - f)
    dh_ok = (f + hoch_differential(m, res.h).scale(res.sign)) == res.corrected
    out = res.to_json()
    out.update({"cochain": new[0], "bimodule": m.name, "correction_is_coboundary": ok,
                "sign_verified": dh_ok})
    return out, "PASS" if ok and dh_ok else "FAIL", {"cochain": new[0]}


def cmd_restrict(args, pf):
    sq = _one(pf.squares, args.square, "square", "--square")
    entries = []
    for n in range(1, args.max_degree + 1):
        mat = cochain_map_matrix(sq, n)
        ind = induced_map_on_cohomology(sq, n)
        entries.append({"degree": n, "cochain_map": mat.to_strings(), "rows": mat.nrows, "cols": mat.ncols,
                        "induced": ind.to_json()})
    return ({"square": sq.name, "entries": entries}, None, {"square": sq.name, "max_degree": args.max_degree})


def _samples(spec, pool, n):
    if spec in (None, "auto"):
        return default_samples(pool, n)
    if spec == "all":
        return default_samples(pool, n, limit=float("inf"))
    try:
        limit = int(spec)
    except ValueError:
        raise UsageError(f"--samples must be auto, all or an integer, not {spec!r}") from None
    return default_samples(pool, n, limit=limit)


def cmd_invariance(args, pf):
    opts = {"kind": args.kind, "max_degree": args.max_degree, "samples": args.samples or "auto"}
    if args.kind == "unit" and args.bimodule is not None:
        m = _one(pf.bimodules, args.bimodule, "bimodule", "--bimodule")
        rep = check_algebra_unitalization(m, max_degree=args.max_degree)
        opts["bimodule"] = m.name
        return rep.to_json(), rep.verdict, opts
    c = _one(pf.categories, args.category, "category", "--category")
    opts["category"] = c.name
    if args.kind == "unit":
        rep = check_category_unitalization(c, max_degree=args.max_degree, diagnostic=args.diagnostic)
        return rep.to_json(), rep.verdict, opts
    pool = karoubi_pool(c) if args.kind == "karoubi" else additive_pool(c)
    rep = TheoremReport(f"envelope-{args.kind}", c.name, str(c.field))
    for n in range(1, args.max_degree + 1):
        sub = verify_envelope_invariance(c, args.kind, n, samples=_samples(args.samples, pool, n), pool=pool)
        rep.entries.extend(sub.entries)
        rep.notes.extend(f"degree {n}: {note}" for note in sub.notes)
    return rep.to_json(), rep.verdict, opts


# -- argument parsing -----------------------------------------------------------------


def _nonneg(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("expected a non-negative integer")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="presentation file")
    common.add_argument("--out", metavar="PATH", help="write the report to PATH instead of standard output")
    common.add_argument("--quiet", action="store_true", help="do not print the report on standard output")

    p = argparse.ArgumentParser(prog="dycoh", description="Exact Davydov-Yetter and Hochschild cohomology "
                                                          "of finite presentations.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__import__('dycoh').__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("validate", parents=[common], help="check the axioms of every declared structure")

    s = sub.add_parser("dy", parents=[common], help="DY cohomology table of a functor")
    s.add_argument("--functor", default="id", help="functor name; `id` is the identity of the only category")
    s.add_argument("--max-degree", type=_nonneg, default=3)
    s.add_argument("--cap", type=_nonneg, default=DEFAULT_CAP, help=f"cochain degree cap (default {DEFAULT_CAP})")

    s = sub.add_parser("hochschild", parents=[common], help="Hochschild cohomology table")
    s.add_argument("--algebra")
    s.add_argument("--bimodule")
    s.add_argument("--max-degree", type=_nonneg, default=2)
    s.add_argument("--cap", type=_nonneg, default=HOCH_CAP, help=f"degree cap (default {HOCH_CAP})")

    s = sub.add_parser("unitalize", parents=[common], help="emit a unitalized presentation file")
    s.add_argument("--category")
    s.add_argument("--algebra")
    s.add_argument("--bimodule", help="also extend this bimodule over the unitalized algebra")

    s = sub.add_parser("normalize", parents=[common], help="normalize a Hochschild cocycle")
    s.add_argument("--cocycle", required=True, metavar="COCYCLE-FILE")
    s.add_argument("--name", help="cochain to use when the cocycle file declares several")

    s = sub.add_parser("restrict", parents=[common], help="restriction data of a square")
    s.add_argument("--square")
    s.add_argument("--max-degree", type=_nonneg, default=2)

    s = sub.add_parser("invariance", parents=[common], help="run a theorem check")
    s.add_argument("--kind", choices=("unit", "karoubi", "additive"), required=True)
    s.add_argument("--category")
    s.add_argument("--bimodule", help="with --kind unit: check the algebra unitalization of this bimodule")
    s.add_argument("--max-degree", type=_nonneg, default=2)
    s.add_argument("--samples", metavar="SPEC",
                   help=f"auto (default: exhaustive up to {EXHAUSTIVE_LIMIT} tuples), all, or an integer limit")
    s.add_argument("--diagnostic", action="store_true", help="add the normalization diagnostic (unit kind)")
    return p


def _emit(args, text):
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc.strerror}") from None
    elif not args.quiet:
        sys.stdout.write(text)


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        pf, data = _load(args.file)
        inputs = [(os.path.basename(args.file), data)]
        if args.command == "unitalize":
            _emit(args, cmd_unitalize(args, pf))
            return EXIT_OK
        if args.command == "normalize":
            pf2, blob = _load(args.cocycle, env=pf)
            inputs.append((os.path.basename(args.cocycle), blob))
            result, verdict, opts = cmd_normalize(args, pf, (pf2, blob))
        else:
            handler = globals()[f"cmd_{args.command}"]
            result, verdict, opts = handler(args, pf)
        _emit(args, dumps(envelope(args.command, inputs, opts, result, verdict)))
    except ParseError:
        return EXIT_USAGE
    except UsageError as exc:
        diag(str(exc))
        return EXIT_USAGE
    except DYError as exc:
        diag(f"{type(exc).__name__}: {exc}")
        return EXIT_USAGE
    return EXIT_FAIL if verdict == "FAIL" else EXIT_OK


def main():
    sys.exit(run())
