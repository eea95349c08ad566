"""Command-line interface: bundle-spec parsing, presets, verification
commands, and exact output emission in text, json or csv.

Exit codes: 0 success (all checks passing), 1 check failures in
verification mode, 2 usage or parse errors.  Rationals are never
printed as floating point; an optional --decimal column adds an exact
decimal expansion for display.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .bundles import CRITICAL_BUNDLES, SplittingType
from .eulerdata import (build_hypergeom_data, check_degree_bound, check_gluing,
                        check_linked, check_reciprocity, lagrange_map,
                        mirror_transform, to_table)
from .pipeline import (PipelineCase, PipelineError, build_hypergeom_series,
                       classify, compute_normalization, run_pipeline)
from .qseries import ScalarQSeries

EMIT_CHOICES = ("kd", "nd", "mirror-map", "f-series", "checks")
DEFAULT_EMIT = ("kd", "nd", "mirror-map", "checks")

# preset name -> (n, bundle text, default order)
PRESETS = {
    "multicover": (1, "O(-1)+O(-1)", 10),
    "local-p2": (2, "O(-3)", 10),
    "p3-concavex": (3, "O(2)+O(-2)", 10),
    "p4-concavex": (4, "O(2)+O(2)+O(-1)", 10),
    "quintic": (4, "O(5)", 12),
}


class BundleParseError(ValueError):
    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} (at position {position})")


@dataclass(frozen=True)
class BundleSpec:
    source: str
    splitting: SplittingType


def parse_bundle(text, n):
    """Parse 'O(a)+O(b)+...' into a splitting type on P^n.

    Positive degrees are convex, negative concave; O(0) is rejected
    because the data's class would not be invertible.
    """
    pos = 0
    length = len(text)

    def skip_ws(p):
        while p < length and text[p].isspace():
            p += 1
        return p

    convex, concave = [], []
    pos = skip_ws(pos)
    if pos == length:
        raise BundleParseError("empty bundle spec", pos)
    while True:
        pos = skip_ws(pos)
        if pos >= length or text[pos] not in "oO":
            raise BundleParseError("expected 'O'", pos)
        pos = skip_ws(pos + 1)
        if pos >= length or text[pos] != "(":
            raise BundleParseError("expected '('", pos)
        pos = skip_ws(pos + 1)
        sign = 1
        if pos < length and text[pos] in "+-":
            sign = -1 if text[pos] == "-" else 1
            pos = skip_ws(pos + 1)
        start = pos
        while pos < length and text[pos].isdigit():
            pos += 1
        if pos == start:
            raise BundleParseError("expected an integer degree", pos)
        degree = sign * int(text[start:pos])
        if degree == 0:
            raise BundleParseError("O(0) not concavex", start)
        pos = skip_ws(pos)
        if pos >= length or text[pos] != ")":
            raise BundleParseError("expected ')'", pos)
        pos = skip_ws(pos + 1)
        (convex if degree > 0 else concave).append(abs(degree))
        if pos == length:
            break
        if text[pos] != "+":
            raise BundleParseError("expected '+' between terms", pos)
        pos += 1
    return BundleSpec(text, SplittingType(n, tuple(convex), tuple(concave)))


def render_bundle(st):
    """Canonical text form; parse(render(st)) round-trips for any
    nontrivial splitting type."""
    return str(st)


# ---------------------------------------------------------------------
# exact decimal display


def exact_decimal(value, digits):
    """Decimal expansion of a rational, correctly rounded, no floats."""
    sign = "-" if value < 0 else ""
    value = abs(value)
    scaled = value * 10 ** digits
    whole = scaled.numerator // scaled.denominator
    if 2 * (scaled.numerator % scaled.denominator) >= scaled.denominator:
        whole += 1
    text = str(whole).rjust(digits + 1, "0")
    if digits == 0:
        return sign + text
    return f"{sign}{text[:-digits]}.{text[-digits:]}"


def _frac_str(value):
    return str(value)


def _frac_json(value):
    return f"{value.numerator}/{value.denominator}"


# ---------------------------------------------------------------------
# compute output


def _result_document(result, bundle_text, emit):
    doc = {
        "bundle": bundle_text,
        "n": result.splitting.n,
        "order": result.order,
        "case": result.case.value,
    }
    if "kd" in emit:
        doc["K"] = [_frac_json(k) for k in result.K]
    if "nd" in emit:
        doc["n_d"] = [{"d": d, "value": _frac_json(v), "integral": flag}
                      for d, v, flag in result.instanton]
    if "mirror-map" in emit:
        doc["mirror_g"] = [_frac_json(c) for c in result.mirror_shift.coeffs[1:]]
    if "checks" in emit:
        doc["checks"] = {name: bool(val) for name, val in sorted(result.checks.items())}
    if "f-series" in emit and result.f_basis is not None:
        doc["f_series"] = [
            {f"{d},{j}": _frac_json(c) for (d, j), c in sorted(f.terms.items())}
            for f in result.f_basis
        ]
    return doc


def _emit_text(result, bundle_text, emit, decimal, out):
    st = result.splitting
    out.write(f"bundle {bundle_text} on P^{st.n}  "
              f"(case {result.case.value}, order {result.order})\n")
    if "kd" in emit or "nd" in emit:
        header = ["d"]
        if "kd" in emit:
            header.append("K_d")
            if decimal is not None:
                header.append(f"K_d ({decimal} digits)")
        if "nd" in emit:
            header += ["n_d", "integral"]
        rows = []
        for idx in range(result.order):
            row = [str(idx + 1)]
            if "kd" in emit:
                row.append(_frac_str(result.K[idx]))
                if decimal is not None:
                    row.append(exact_decimal(result.K[idx], decimal))
            if "nd" in emit:
                d, v, flag = result.instanton[idx]
                row += [_frac_str(v), "yes" if flag else "NO"]
            rows.append(row)
        widths = [max(len(r[c]) for r in [header] + rows) for c in range(len(header))]
        for r in [header] + rows:
            out.write("  ".join(cell.rjust(w) for cell, w in zip(r, widths)) + "\n")
    if "mirror-map" in emit:
        out.write(f"mirror map shift g: {result.mirror_shift}\n")
    if "f-series" in emit and result.f_basis is not None:
        for i, f in enumerate(result.f_basis):
            out.write(f"f_{i}: {f}\n")
    if "checks" in emit:
        line = "; ".join(f"{name}={'ok' if val else 'FAIL'}"
                         for name, val in sorted(result.checks.items()))
        out.write(f"checks: {line}\n")


def _emit_csv(result, emit, decimal, out):
    header = ["d"]
    if "kd" in emit:
        header.append("K")
        if decimal is not None:
            header.append("K_decimal")
    if "nd" in emit:
        header += ["n_d", "n_d_integral"]
    if "mirror-map" in emit:
        header.append("mirror_g")
    out.write(",".join(header) + "\n")
    for idx in range(result.order):
        row = [str(idx + 1)]
        if "kd" in emit:
            row.append(_frac_str(result.K[idx]))
            if decimal is not None:
                row.append(exact_decimal(result.K[idx], decimal))
        if "nd" in emit:
            d, v, flag = result.instanton[idx]
            row += [_frac_str(v), "true" if flag else "false"]
        if "mirror-map" in emit:
            row.append(_frac_str(result.mirror_shift.coeffs[idx + 1]))
        out.write(",".join(row) + "\n")


# ---------------------------------------------------------------------
# cache


def _cache_path(cache_dir, bundle_text, n, order):
    key = f"{bundle_text}|{n}|{order}|{__version__}"
    digest = hashlib.sha256(key.encode()).hexdigest()[:24]
    return os.path.join(cache_dir, f"mirrorcalc-{digest}.json")


def _cache_load(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except (OSError, ValueError):
        return None
    if payload.get("version") != __version__:
        return None
    return payload.get("document")


def _cache_store(path, document):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"version": __version__, "document": document}, fh)


# ---------------------------------------------------------------------
# config file


def load_config(path):
    """Simple key=value defaults; '#' starts a comment."""
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    return values


# ---------------------------------------------------------------------
# commands


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="mirrorcalc",
        description="Exact Gromov-Witten and instanton numbers for "
                    "concavex line-bundle sums on projective space.")
    sub = parser.add_subparsers(dest="command", required=True)

    comp = sub.add_parser("compute", help="run the full pipeline for a bundle")
    comp.add_argument("--preset", choices=sorted(PRESETS))
    comp.add_argument("--n", type=int, help="ambient projective dimension")
    comp.add_argument("--bundle", help="splitting type, e.g. 'O(2)+O(-2)'")
    comp.add_argument("--order", type=int, help="q-truncation order D")
    comp.add_argument("--format", choices=("text", "json", "csv"))
    comp.add_argument("--emit", help="comma list from: " + ",".join(EMIT_CHOICES))
    comp.add_argument("--decimal", type=int, help="extra display column with this many digits")
    comp.add_argument("--cache", help="cache directory (default: $MIRRORCALC_CACHE)")
    comp.add_argument("--config", help="key=value config file supplying defaults")

    ver = sub.add_parser("verify", help="symbolic verification of the data identities")
    ver.add_argument("check", choices=("gluing", "reciprocity", "linking", "degree-bound"))
    ver.add_argument("--n", type=int, required=True)
    ver.add_argument("--bundle", required=True)
    ver.add_argument("--dmax", type=int, help="verification degree bound (default 4)")
    ver.add_argument("--with-x", action="store_true", dest="with_x",
                     help="use the x-extended data")
    ver.add_argument("--format", choices=("text", "json"), default="json")
    ver.add_argument("--config", help="key=value config file supplying defaults")

    sub.add_parser("list-critical", help="print the table of critical bundles") \
       .add_argument("--format", choices=("text", "json", "csv"), default="text")
    return parser


def _cmd_compute(args, out, err):
    config = {}
    if args.config:
        config = load_config(args.config)
    if args.preset:
        if args.bundle or args.n is not None:
            err.write("error: --preset conflicts with --n/--bundle\n")
            return 2
        n, bundle_text, default_order = PRESETS[args.preset]
    else:
        if args.bundle is None or args.n is None:
            err.write("error: need --preset or both --n and --bundle\n")
            return 2
        n, bundle_text, default_order = args.n, args.bundle, 10
    if args.order is None:
        order = int(config.get("order", default_order))
    else:
        order = args.order
    if order < 1:
        err.write("error: --order must be >= 1\n")
        return 2
    fmt = args.format or config.get("format") or "text"
    emit_text = args.emit or config.get("emit") or ",".join(DEFAULT_EMIT)
    emit = tuple(tok.strip() for tok in emit_text.split(",") if tok.strip())
    for tok in emit:
        if tok not in EMIT_CHOICES:
            err.write(f"error: unknown emit item '{tok}'\n")
            return 2
    decimal = args.decimal if args.decimal is not None else (
        int(config["decimal"]) if "decimal" in config else None)
    if decimal is not None and decimal < 0:
        err.write("error: --decimal must be >= 0\n")
        return 2

    try:
        spec = parse_bundle(bundle_text, n)
    except (BundleParseError, ValueError) as exc:
        err.write(f"parse error: {exc}\n")
        return 2

    cache_dir = args.cache or config.get("cache") or os.environ.get("MIRRORCALC_CACHE")
    canonical = render_bundle(spec.splitting)
    document = None
    if cache_dir:
        document = _cache_load(_cache_path(cache_dir, canonical, n, order))
    result = None
    if document is None:
        try:
            result = run_pipeline(spec.splitting, order)
        except PipelineError as exc:
            err.write(f"error: {exc}\n")
            return 2
        document = _result_document(result, bundle_text,
                                    EMIT_CHOICES)  # cache everything
        if cache_dir:
            _cache_store(_cache_path(cache_dir, canonical, n, order), document)
    if fmt == "json":
        emitted = {k: v for k, v in document.items()
                   if k in ("bundle", "n", "order", "case")
                   or _emit_key(k) in emit}
        out.write(json.dumps(emitted, indent=2) + "\n")
    else:
        if result is None:
            result = _result_from_document(document, spec.splitting)
        if fmt == "csv":
            _emit_csv(result, emit, decimal, out)
        else:
            _emit_text(result, bundle_text, emit, decimal, out)
    err.write(f"note: values are exact and emitted through the truncation "
              f"order D={order}\n")
    return 0


def _emit_key(key):
    return {"K": "kd", "n_d": "nd", "mirror_g": "mirror-map",
            "checks": "checks", "f_series": "f-series"}.get(key, "")


def _result_from_document(document, st):
    """Rebuild a result object from a cached document (exact strings)."""
    from .pipeline import PipelineResult
    from .qseries import TSeries

    def parse_frac(text):
        num, _, den = text.partition("/")
        return Fraction(int(num), int(den or "1"))

    K = [parse_frac(s) for s in document["K"]]
    instanton = [(e["d"], parse_frac(e["value"]), e["integral"])
                 for e in document["n_d"]]
    order = document["order"]
    shift = ScalarQSeries(order, [Fraction(0)] + [parse_frac(s) for s in document["mirror_g"]])
    f_basis = None
    if "f_series" in document:
        f_basis = []
        for entry in document["f_series"]:
            terms = {}
            for key, val in entry.items():
                d, _, j = key.partition(",")
                terms[(int(d), int(j))] = parse_frac(val)
            f_basis.append(TSeries(order, terms))
    return PipelineResult(st, order, PipelineCase(document["case"]), K, instanton,
                          shift, ScalarQSeries.one(order), f_basis,
                          {k: v for k, v in document.get("checks", {}).items()})


def _cmd_verify(args, out, err):
    config = load_config(args.config) if args.config else {}
    d_max = args.dmax if args.dmax is not None else int(config.get("dmax", 4))
    if d_max < 1:
        err.write("error: --dmax must be >= 1\n")
        return 2
    try:
        spec = parse_bundle(args.bundle, args.n)
    except (BundleParseError, ValueError) as exc:
        err.write(f"parse error: {exc}\n")
        return 2
    st = spec.splitting
    data = build_hypergeom_data(st, with_x=args.with_x)
    table = to_table(data, d_max)
    if args.check == "gluing":
        report = check_gluing(table)
    elif args.check == "reciprocity":
        report = check_reciprocity(table)
    elif args.check == "degree-bound":
        report = check_degree_bound(table)
    else:
        shift = _linking_shift(st, d_max, args.with_x)
        transformed = mirror_transform(table.restriction_sequence(), None, shift)
        report = check_linked(table, lagrange_map(transformed))
    if args.format == "json":
        out.write(report.to_json(indent=2) + "\n")
    else:
        out.write(f"{report.check}: n={report.n} d_max={report.d_max} "
                  f"all_pass={report.all_pass} "
                  f"({len(report.failures)} failures, "
                  f"{len(report.inconclusive)} inconclusive)\n")
        for r in report.failures + report.inconclusive:
            out.write(f"  d={r.d} i={r.i} r={r.r} {r.status}: {r.witness}\n")
    return 0 if report.all_pass else 1


def _linking_shift(st, d_max, with_x):
    """The shift used to exhibit a nontrivial mirror transform: the
    canonical one for critical types, a unit one-term shift otherwise."""
    if not with_x and st.is_critical and classify(st) is not PipelineCase.UNSUPPORTED:
        series = build_hypergeom_series(st, d_max)
        _, shift = compute_normalization(series, st)
        return shift
    return ScalarQSeries.q(d_max)


def _cmd_list_critical(args, out):
    rows = [(st.n, render_bundle(st)) for st in CRITICAL_BUNDLES]
    if args.format == "json":
        out.write(json.dumps([{"n": n, "bundle": b} for n, b in rows], indent=2) + "\n")
    elif args.format == "csv":
        out.write("n,bundle\n")
        for n, b in rows:
            out.write(f"{n},{b}\n")
    else:
        for n, b in rows:
            out.write(f"P^{n}: {b}\n")
    return 0


def run_command(argv, out=None, err=None):
    """Entry point used by the console script; returns the exit code."""
    out = out or sys.stdout
    err = err or sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if args.command == "compute":
            return _cmd_compute(args, out, err)
        if args.command == "verify":
            return _cmd_verify(args, out, err)
        return _cmd_list_critical(args, out)
    except ValueError as exc:
        err.write(f"error: {exc}\n")
        return 2


def main():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
