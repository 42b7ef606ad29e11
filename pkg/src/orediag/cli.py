"""Command-line front end: read an algebra and a matrix, diagonalize, verify, report.

Input is either a YAML document::

    algebra:
      preset: weyl            # or custom, with sigma/delta images
      variables: [x]
      op: d
      field: QQ               # or GF(p)
    matrix: "[[d^2-1, d+1], [d^2+1, d-x]]"
    options:
      strategy: both
      jacobson: true

or a bare matrix in bracket notation, with the algebra taken from flags.
Exit codes: 0 success, 2 parse error, 3 invalid algebra or options,
4 iteration cap, 5 verification failure, 6 Jacobson form over a non-simple
algebra, 1 any other error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Optional

import yaml

from .coeff import parse_field
from .diagonalize import diagonalize, is_unimodular_over_rstar, normalize_diagonal, verify_decomposition
from .errors import (IterationCapExceeded, NotSimpleDomain, OreError, ParseError, SpecError,
                     VerificationError)
from .jacobson import cyclic_vector_probe, strengthen_diagonal
from .matrix import OreFraction, OreMatrix
from .ore import AlgebraSpec, term_key_grevlex
from .parse import parse_base_poly, parse_matrix, parse_rows
from .rational import RatOrePoly, diagonalize_rational, rat_matmul, rational_degrees

EXIT_OK, EXIT_ERROR, EXIT_PARSE, EXIT_VALIDATE, EXIT_CAP, EXIT_VERIFY, EXIT_NOT_SIMPLE = 0, 1, 2, 3, 4, 5, 6

DEFAULT_OPTIONS = {"strategy": "polynomial", "jacobson": False, "normalize": False, "seed": 0,
                   "max_iter": 100, "tiebreak": "grevlex", "sideswap": "auto", "certify": True}


# ---------------------------------------------------------------------------
# input


@dataclass
class InputDocument:
    algebra: dict
    matrix: object  # bracket text or list of rows
    options: dict = field(default_factory=dict)


def load_document(text: str, overrides: Optional[dict] = None, algebra: Optional[dict] = None) -> InputDocument:
    """Parse YAML (or a bare bracket matrix) and merge command-line settings."""
    stripped = text.strip()
    if not stripped:
        raise ParseError("empty input")
    if stripped.startswith("["):
        doc = {"matrix": stripped}
    else:
        try:
            doc = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ParseError(f"invalid YAML: {exc}") from None
        if not isinstance(doc, dict) or "matrix" not in doc:
            raise ParseError("input must be a mapping with a 'matrix' entry or a bracket matrix")
    alg = dict(doc.get("algebra") or {})
    for k, v in (algebra or {}).items():
        if v is not None:
            alg[k] = v
    opts = dict(DEFAULT_OPTIONS)
    opts.update({k.replace("-", "_"): v for k, v in (doc.get("options") or {}).items()})
    for k, v in (overrides or {}).items():
        if v is not None:
            opts[k] = v
    return InputDocument(alg, doc["matrix"], opts)


def build_algebra(desc: dict) -> AlgebraSpec:
    """Algebra from a description mapping (preset or custom images)."""
    fld = desc.get("field", "QQ")
    if desc.get("prime") is not None:
        fld = f"GF({desc['prime']})"
    fld = parse_field(str(fld)) if not hasattr(fld, "characteristic") else fld
    preset = str(desc.get("preset", "weyl")).lower()
    variables = desc.get("variables")
    if isinstance(variables, str):
        variables = [v.strip() for v in variables.split(",") if v.strip()]
    op = desc.get("op")
    if preset != "custom":
        return AlgebraSpec.preset_algebra(preset, variables, op, desc.get("active"), desc.get("q"), fld)
    if not variables or not op:
        raise SpecError("a custom algebra needs 'variables' and 'op'")
    helper = AlgebraSpec.preset_algebra("commutative", variables, op, field=fld)
    sigma = {k: parse_base_poly(str(v), helper) for k, v in (desc.get("sigma") or {}).items()}
    delta = {k: parse_base_poly(str(v), helper) for k, v in (desc.get("delta") or {}).items()}
    for k in list(sigma) + list(delta):
        if k not in variables:
            raise SpecError(f"image given for unknown variable '{k}'")
    return AlgebraSpec.custom(variables, op, sigma, delta, fld)


def read_matrix(source, spec: AlgebraSpec) -> OreMatrix:
    if isinstance(source, str):
        return parse_matrix(source, spec)
    return parse_rows(source, spec)


# ---------------------------------------------------------------------------
# encoding


def _pair(c, fld):
    n, d = fld.pair(c)
    return str(n), str(d)


def encode_entry(e):
    """Coefficient tuples ``[exponents, op_power, numerator, denominator]``, leading term first."""
    if isinstance(e, RatOrePoly):
        e = e.to_ore()
    if isinstance(e, OreFraction):
        fld = e.spec.field
        den = [[list(a), *_pair(e.den.terms[a], fld)] for a in sorted(e.den.terms, reverse=True)]
        return {"denominator": den, "numerator": encode_entry(e.num)}
    fld = e.spec.field
    out = []
    for (b, a), c in e.sorted_terms(term_key_grevlex):
        out.append([list(a), b, *_pair(c, fld)])
    return out


def _text(e):
    return e.to_string() if hasattr(e, "to_string") else str(e)


def encode_matrix(rows):
    rows = rows.rows if isinstance(rows, OreMatrix) else rows
    return {"text": [[_text(e) for e in r] for r in rows],
            "entries": [[encode_entry(e) for e in r] for r in rows]}


def _algebra_echo(spec: AlgebraSpec):
    return {"preset": spec.preset, "variables": list(spec.var_names), "op": spec.op_name,
            "field": spec.field.name if hasattr(spec.field, "name") else str(spec.field),
            "q": None if spec.q is None else str(spec.q), "relations": spec.relations()}


# ---------------------------------------------------------------------------
# pipeline


@dataclass
class Report:
    data: dict
    exit_code: int = EXIT_OK
    failures: list = field(default_factory=list)


def _stats(stats, timings):
    d = stats.to_dict()
    if not timings:
        d.pop("wall_time", None)
    return d


def run_pipeline(doc: InputDocument, timings: bool = False) -> Report:
    """Diagonalize with the requested strategies, verify everything, build the report."""
    opts = doc.options
    strategy = str(opts["strategy"]).lower()
    if strategy not in ("polynomial", "rational", "both"):
        raise SpecError(f"unknown strategy '{strategy}'")
    spec = build_algebra(doc.algebra)
    M = read_matrix(doc.matrix, spec)
    max_iter, tiebreak, sideswap = int(opts["max_iter"]), str(opts["tiebreak"]), str(opts["sideswap"])
    if tiebreak not in ("grevlex", "lex"):
        raise SpecError(f"unknown order tie-break '{tiebreak}'")
    if strategy != "polynomial" and spec.nvars != 1:
        raise SpecError("the rational strategy needs exactly one base variable")

    data = {"algebra": _algebra_echo(spec), "input": encode_matrix(M), "options": {
        "strategy": strategy, "jacobson": bool(opts["jacobson"]), "normalize": bool(opts["normalize"]),
        "seed": opts["seed"], "max_iter": max_iter, "tiebreak": tiebreak, "sideswap": sideswap}}
    failures = []
    results = {}
    stats = {}

    rat = None
    if strategy in ("rational", "both"):
        rat = diagonalize_rational(M, max_iter=max_iter, sideswap=sideswap)
        rdeg = sorted(rational_degrees(rat), reverse=True)
        ok = rat_matmul(rat_matmul(rat.U, rat.M), rat.V) == rat.D
        if not ok:
            failures.append("rational: U*M*V = D")
        entry = {"iterations": rat.iterations, "sideswap": rat.sideswap,
                 "D": encode_matrix(rat.D), "U": encode_matrix(rat.U), "V": encode_matrix(rat.V),
                 "verification": {"identity": ok, "degrees": rdeg, "degree_sum": sum(rdeg)}}
        if opts["normalize"]:
            entry["normalized"] = [_text(e.monic()) if e else "0" for e in
                                   (rat.D[k][k] for k in range(min(len(rat.D), len(rat.D[0]))))]
        results["rational"] = entry
        stats["rational"] = _stats(rat.stats, timings)

    poly = None
    if strategy in ("polynomial", "both"):
        poly = diagonalize(M, tiebreak=tiebreak, max_iter=max_iter, sideswap=sideswap)
        base_sum = sum(rational_degrees(rat)) if rat is not None else None
        rep = verify_decomposition(M, poly, baseline_degree_sum=base_sum, certify=bool(opts["certify"]))
        failures += [f"polynomial: {f}" for f in rep.failures()]
        u_ok, _ = is_unimodular_over_rstar(poly.U)
        v_ok, v_inv = is_unimodular_over_rstar(poly.V)
        entry = {"iterations": poly.iterations, "sideswap": poly.sideswap,
                 "D": encode_matrix(poly.D), "U": encode_matrix(poly.U), "V": encode_matrix(poly.V),
                 "T": encode_matrix(poly.T), "verification": rep.to_dict(),
                 "unimodular_over_polynomial_ring": {"U": u_ok, "V": v_ok}}
        if opts["normalize"]:
            entry["normalized"] = [_text(e) for e in normalize_diagonal(poly.D)]
        results["polynomial"] = entry
        stats["polynomial"] = _stats(poly.stats, timings)

    data["results"] = results
    data["stats"] = stats

    if opts["jacobson"]:
        D = poly.D if poly is not None else rat.D
        rows = D.rows if isinstance(D, OreMatrix) else D
        n = min(len(rows), len(rows[0]))
        diag = [[rows[i][i] if i == j else spec.zero() for j in range(n)] for i in range(n)]
        diag = OreMatrix(diag, spec) if isinstance(D, OreMatrix) else [
            [rows[i][i] if i == j else RatOrePoly.zero(spec) for j in range(n)] for i in range(n)]
        jac = strengthen_diagonal(diag, certify=bool(opts["certify"]))
        probe = cyclic_vector_probe(diag, seed=int(opts["seed"]))
        jd = jac.to_dict()
        jd.update({"U": encode_matrix(jac.U), "V": encode_matrix(jac.V), "D": encode_matrix(jac.D),
                   "probe": probe.to_dict()})
        data["jacobson"] = jd

    code = EXIT_OK
    if failures:
        code = EXIT_VERIFY
    data["failures"] = failures
    data["exit_code"] = code
    return Report(data, code, failures)


# ---------------------------------------------------------------------------
# output


def emit_report(report: Report, fmt: str = "text") -> bytes:
    if fmt in ("structured", "json"):
        return (json.dumps(report.data, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    if fmt != "text":
        raise ValueError(f"unknown output format '{fmt}'")
    d = report.data
    a = d["algebra"]
    lines = [f"algebra: {a['preset']} in {', '.join(a['variables'])} with {a['op']} over {a['field']}",
             "relations: " + "; ".join(f"{a['op']}*{k} = {v}" for k, v in a["relations"].items()), ""]
    for name, r in d["results"].items():
        lines.append(f"[{name}] {r['iterations']} iterations, side swap by {r['sideswap']}")
        for key in ("D", "U", "V", "T"):
            if key in r:
                lines.append(f"{key} =")
                lines += ["  [" + ", ".join(row) + "]" for row in r[key]["text"]]
        if "normalized" in r:
            lines.append("normalized diagonal: " + ", ".join(r["normalized"]))
        v = r["verification"]
        lines.append("verification: " + ", ".join(f"{k}={v[k]}" for k in v))
        if "unimodular_over_polynomial_ring" in r:
            um = r["unimodular_over_polynomial_ring"]
            lines.append(f"invertible over the polynomial ring: U={um['U']}, V={um['V']}")
        st = d["stats"][name]
        lines.append("coefficient bits per iteration: " + " ".join(str(it["max_coeff_bits"])
                                                                for it in st["iterations"]))
        if "wall_time" in st:
            lines.append(f"wall time: {st['wall_time']:.3f} s")
        lines.append("")
    if "jacobson" in d:
        j = d["jacobson"]
        lines.append("Jacobson form: Diag(" + ", ".join(j["diagonal"]) + ")")
        lines.append(f"degree certificate: {j['degree_certificate']} (input degrees {j['input_degrees']})")
        p = j["probe"]
        lines.append(f"cyclic vector probe (seed {p['seed']}): degree {p['degree']} of {p['target_degree']}, "
                     f"{'passed' if p['passed'] else 'retry'}")
        lines.append("")
    lines.append("status: " + ("ok" if not d["failures"] else "FAILED: " + "; ".join(d["failures"])))
    return ("\n".join(lines) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# entry point


def _parser():
    p = argparse.ArgumentParser(prog="orediag", description="Diagonal and Jacobson forms of Ore polynomial "
                                                              "matrices via Groebner bases.")
    p.add_argument("input", nargs="?", default="-", help="YAML document or bracket matrix; '-' for stdin")
    p.add_argument("--algebra", help="preset: weyl, shift, difference, qweyl, qdifference, commutative, custom")
    p.add_argument("--field", help="QQ or GF(p)")
    p.add_argument("--vars", help="comma-separated base variable names")
    p.add_argument("--op", help="name of the Ore variable")
    p.add_argument("--active", help="base variable that does not commute with the Ore variable")
    p.add_argument("--q", help="q value for the q-presets")
    p.add_argument("--strategy", choices=["polynomial", "rational", "both"])
    p.add_argument("--jacobson", action="store_true", default=None, help="strengthen to Jacobson form")
    p.add_argument("--normalize", action="store_true", default=None, help="report monic diagonal entries")
    p.add_argument("--seed", type=int, help="seed for the cyclic vector probe")
    p.add_argument("--max-iter", type=int, dest="max_iter")
    p.add_argument("--order-tiebreak", choices=["grevlex", "lex"], dest="tiebreak")
    p.add_argument("--sideswap", choices=["auto", "involution", "opposite"])
    p.add_argument("--output", choices=["text", "structured", "json"], default="text")
    p.add_argument("--out", help="write the report to this file instead of stdout")
    p.add_argument("--timings", action="store_true", help="include wall times (output is then not byte-stable)")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        text = sys.stdin.read() if args.input == "-" else open(args.input, encoding="utf-8").read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    algebra = {"preset": args.algebra, "field": args.field, "variables": args.vars, "op": args.op,
               "active": args.active, "q": args.q}
    overrides = {"strategy": args.strategy, "jacobson": args.jacobson, "normalize": args.normalize,
                 "seed": args.seed, "max_iter": args.max_iter, "tiebreak": args.tiebreak,
                 "sideswap": args.sideswap}
    try:
        doc = load_document(text, overrides, algebra)
        report = run_pipeline(doc, timings=args.timings)
    except ParseError as exc:
        return _fail(exc, EXIT_PARSE)
    except NotSimpleDomain as exc:
        return _fail(exc, EXIT_NOT_SIMPLE)
    except IterationCapExceeded as exc:
        return _fail(exc, EXIT_CAP)
    except VerificationError as exc:
        return _fail(exc, EXIT_VERIFY)
    except SpecError as exc:
        return _fail(exc, EXIT_VALIDATE)
    except OreError as exc:
        return _fail(exc, EXIT_ERROR)
    out = emit_report(report, args.output)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(out)
    else:
        sys.stdout.buffer.write(out)
        sys.stdout.flush()
    if report.failures:
        print("verification failed: " + "; ".join(report.failures), file=sys.stderr)
    return report.exit_code


def _fail(exc, code):
    print(f"error: {exc}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
