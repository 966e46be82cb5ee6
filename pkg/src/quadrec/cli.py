"""Command-line front end: argument parsing, literal syntax, output
serialization, and the worker pool for range-sharded searches.

Output discipline: every numeric value in JSON goes out as a decimal string
(floats via shortest round-trip repr), CSV streams carry a versioned schema
comment, and hit lists are emitted in sorted order, so identical configs
produce byte-identical output.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional

from .certificates import certificate_for_n, witness_limit
from .dynamics import expected_count, multiplicative_rank
from .errors import (DegenerateInputError, FactorizationError, QuadrecError,
                     UsageError)
from .heights import (DEFAULT_PRECISION, abc_quality, phi_norm_ratio, radical,
                      triple_height)
from .periods import (RecurrenceTuple, fibonacci_tuple, lucas_tuple,
                      period_bruteforce, period_formula)
from .ring import (QuadraticElement, as_element, factorize,
                   prime_ideals_above, quadratic_field, sqrt_element)
from .search import search_range, wall_predicate, wieferich_predicate

PRECISION_ENV = "QUADREC_PRECISION"

# ---------------------------------------------------------------------------
# quadratic literals: "a", "a/b", "sqrt(d)", "b*sqrt(d)", "(a+b*sqrt(d))/c"

_RAT = r"[+-]?\d+(?:/\d+)?"
_POSRAT = r"\d+(?:/\d+)?"
_ROOT = (rf"(?P<rsign>[+-])?(?:(?P<coef>{_POSRAT})\*)?"
         rf"sqrt\((?P<d>-?\d+)\)")
_SUM = (rf"(?P<a>{_RAT})(?P<sign>[+-])"
        rf"(?:(?P<coef>{_POSRAT})\*)?sqrt\((?P<d>-?\d+)\)")


def _parse_body(s: str) -> tuple[Fraction, Fraction, Optional[int]]:
    if re.fullmatch(_RAT, s):
        return Fraction(s), Fraction(0), None
    m = re.fullmatch(_ROOT, s)
    if m:
        coef = Fraction(m["coef"]) if m["coef"] else Fraction(1)
        if m["rsign"] == "-":
            coef = -coef
        return Fraction(0), coef, int(m["d"])
    m = re.fullmatch(_SUM, s)
    if m:
        coef = Fraction(m["coef"]) if m["coef"] else Fraction(1)
        if m["sign"] == "-":
            coef = -coef
        return Fraction(m["a"]), coef, int(m["d"])
    raise UsageError(f"malformed quadratic literal {s!r}")


def parse_quadratic(text: str, field_d: Optional[int] = None) -> QuadraticElement:
    """Exact element from a literal; sqrt(d) must agree with field_d if both
    are present."""
    s = text.replace(" ", "")
    den = 1
    m = re.fullmatch(r"\((?P<inner>.*)\)(?:/(?P<den>\d+))?", s)
    if m:
        s = m["inner"]
        den = int(m["den"]) if m["den"] else 1
        if den == 0:
            raise UsageError("zero denominator")
    a, b, d = _parse_body(s)
    if d is None:
        field = quadratic_field(field_d) if field_d is not None else None
        return as_element(a / den, field)
    if field_d is not None and field_d != d:
        raise UsageError(f"literal uses sqrt({d}) but --field-d is {field_d}")
    K = quadratic_field(d)
    return (as_element(a, K) + as_element(b, K) * sqrt_element(K)) / den


def format_quadratic(x: QuadraticElement) -> str:
    """Canonical literal; parse_quadratic(format_quadratic(x), d) == x when d
    names x's field.  Rational values print without a field tag, so the bare
    round-trip recovers them as plain rationals."""
    if x.field is None or x.num_b == 0:
        return str(Fraction(x.num_a, x.den))
    f = x.field
    if f.omega_trace:  # basis element is (1 + sqrt(d))/2
        A, B, C = 2 * x.num_a + x.num_b, x.num_b, 2 * x.den
    else:
        A, B, C = x.num_a, x.num_b, x.den
    g = math.gcd(A, B, C)
    A, B, C = A // g, B // g, C // g
    root = f"sqrt({f.d})"
    if A == 0:
        coef = Fraction(B, C)
        if coef == 1:
            return root
        if coef == -1:
            return f"-{root}"
        return f"{coef}*{root}"
    bs = root if abs(B) == 1 else f"{abs(B)}*{root}"
    inner = f"{A}{'+' if B > 0 else '-'}{bs}"
    return f"({inner})/{C}" if C > 1 else inner


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    field_d: Optional[int] = None
    base: Optional[str] = None        # canonical literal
    tuple_spec: Optional[str] = None  # preset name or canonical roots;weights
    modulus: Optional[int] = None
    lo: Optional[int] = None
    hi: Optional[int] = None
    bound: Optional[int] = None
    n_from: int = 1
    n_to: int = 20
    gens: tuple[str, ...] = ()
    checkpoint: Optional[str] = None
    resume: bool = False
    emit: str = "json"
    workers: int = 1
    precision: int = DEFAULT_PRECISION

    def config_hash(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("ascii")).hexdigest()[:16]


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # deterministic exit codes instead of SystemExit
        raise UsageError(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="quadrec", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp, *, base=False, field=True, emit=("json", "csv")):
        if base:
            sp.add_argument("--base", required=True,
                            help="rational or quadratic literal, e.g. 2, 3/2, "
                                 "(1+sqrt(5))/2")
        if field:
            sp.add_argument("--field-d", type=int, default=None,
                            help="squarefree field discriminant parameter d")
        if emit:
            sp.add_argument("--emit", choices=emit, default=emit[0])

    sp = sub.add_parser("period", help="period of a recurrence modulo m")
    sp.add_argument("--tuple", dest="tuple_spec", default="fibonacci",
                    help="preset (fibonacci, lucas) or 'r1,r2;w1,w2' literals")
    sp.add_argument("--mod", dest="modulus", type=int, required=True)
    common(sp, emit=("text", "json"))

    for name in ("search-wss", "search-wieferich"):
        sp = sub.add_parser(name, help="checkpointable prime range scan")
        if name == "search-wieferich":
            common(sp, base=True)
        else:
            common(sp, field=False)
        sp.add_argument("--from", dest="lo", type=int, default=2)
        sp.add_argument("--to", dest="hi", type=int, required=True)
        sp.add_argument("--checkpoint", default=None)
        sp.add_argument("--resume", action="store_true")
        sp.add_argument("--workers", type=int, default=1)

    sp = sub.add_parser("certify", help="cyclotomic non-Wieferich certificates")
    common(sp, base=True)
    sp.add_argument("--bound", type=int, required=True)

    sp = sub.add_parser("abc-quality", help="quality of the power triple family")
    common(sp, base=True, emit=("csv", "json"))
    sp.add_argument("--n-from", type=int, default=1)
    sp.add_argument("--n-to", type=int, default=20)

    sp = sub.add_parser("phi-ratio", help="cyclotomic log-norm ratios")
    common(sp, base=True, emit=("csv", "json"))
    sp.add_argument("--n-from", type=int, default=1)
    sp.add_argument("--n-to", type=int, default=60)

    sp = sub.add_parser("rank", help="free rank of a multiplicative group")
    sp.add_argument("--gen", dest="gens", action="append", required=True)
    common(sp, emit=None)

    sp = sub.add_parser("heuristic", help="expected-count sums per decade")
    sp.add_argument("--gen", dest="gens", action="append", required=True)
    sp.add_argument("--bound", type=int, required=True)
    common(sp, emit=("csv", "json"))
    return p


def _canonical_tuple_spec(spec: str, field_d: Optional[int]) -> str:
    if spec in ("fibonacci", "lucas"):
        return spec
    if ";" not in spec:
        raise UsageError("tuple must be a preset name or 'roots;weights'")
    roots_s, weights_s = spec.split(";", 1)
    roots = [parse_quadratic(s, field_d) for s in roots_s.split(",") if s]
    weights = [parse_quadratic(s, field_d) for s in weights_s.split(",") if s]
    if not roots or len(roots) != len(weights):
        raise UsageError("tuple needs equally many roots and weights")
    return (",".join(format_quadratic(r) for r in roots) + ";"
            + ",".join(format_quadratic(w) for w in weights))


def _resolve_tuple(spec: str, field_d: Optional[int]) -> RecurrenceTuple:
    if spec == "fibonacci":
        return fibonacci_tuple()
    if spec == "lucas":
        return lucas_tuple()
    roots_s, weights_s = spec.split(";", 1)
    roots = [parse_quadratic(s, field_d) for s in roots_s.split(",") if s]
    weights = [parse_quadratic(s, field_d) for s in weights_s.split(",") if s]
    field = next((x.field for x in roots + weights if x.field is not None), None)
    return RecurrenceTuple(tuple(as_element(r, field) for r in roots),
                           tuple(as_element(w, field) for w in weights),
                           name="custom")


def parse_args(argv) -> RunConfig:
    ns = _build_parser().parse_args(argv)
    fields = {}
    for key in ("subcommand", "field_d", "modulus", "lo", "hi", "bound",
                "n_from", "n_to", "checkpoint", "resume", "emit", "workers"):
        if hasattr(ns, key):
            fields[key] = getattr(ns, key)
    if fields.get("field_d") is not None:
        quadratic_field(fields["field_d"])  # validates squarefree, not 0 or 1
    if fields.get("workers", 1) < 1:
        raise UsageError("--workers must be >= 1")
    if fields.get("modulus") is not None and fields["modulus"] < 1:
        raise UsageError("--mod must be >= 1")
    raw = os.environ.get(PRECISION_ENV)
    if raw is not None:
        try:
            fields["precision"] = int(raw)
        except ValueError:
            raise UsageError(f"{PRECISION_ENV} must be an integer, got {raw!r}")
        if fields["precision"] < 24:
            raise UsageError(f"{PRECISION_ENV} must be at least 24 bits")
    if getattr(ns, "base", None) is not None:
        fields["base"] = format_quadratic(
            parse_quadratic(ns.base, fields.get("field_d")))
    if getattr(ns, "tuple_spec", None) is not None:
        fields["tuple_spec"] = _canonical_tuple_spec(
            ns.tuple_spec, fields.get("field_d"))
    if getattr(ns, "gens", None):
        fields["gens"] = tuple(
            format_quadratic(parse_quadratic(s, fields.get("field_d")))
            for s in ns.gens)
    return RunConfig(**fields)


# ---------------------------------------------------------------------------
# serialization


def _stringify(v):
    if isinstance(v, bool):
        return v
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, int):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_stringify(x) for x in v]
    if isinstance(v, dict):
        return {k: _stringify(x) for k, x in v.items()}
    return v


def _json_line(obj) -> str:
    return json.dumps(_stringify(obj), sort_keys=True, separators=(",", ":"))


def _csv_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return "|".join(str(x) for x in v)
    return str(v)


def _emit_csv(name: str, header: list[str], rows, out) -> None:
    print(f"# schema: quadrec.{name}.v1", file=out)
    print(",".join(header), file=out)
    for row in rows:
        print(",".join(_csv_cell(v) for v in row), file=out)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_period(cfg: RunConfig, out) -> None:
    t = _resolve_tuple(cfg.tuple_spec, cfg.field_d)
    try:
        fac = [(P, e) for p, e in sorted(factorize(cfg.modulus).items())
               for P in prime_ideals_above(t.field(), p)]
        rep = period_formula(t, fac)
    except DegenerateInputError:
        rep = period_bruteforce(t, cfg.modulus)
    if cfg.emit == "json":
        print(_json_line({
            "modulus": cfg.modulus, "period": rep.period,
            "method": rep.method,
            "orders": [{"generator": i, "ideal": lbl, "order": o}
                       for i, lbl, o in rep.per_generator_orders],
        }), file=out)
    else:
        print(rep.period, file=out)


def _scan_shard(spec: tuple) -> tuple[list, int]:
    kind, base, field_d, lo, hi = spec
    if kind == "wall":
        pred = wall_predicate()
    else:
        pred = wieferich_predicate(parse_quadratic(base, field_d), field_d)
    ck = search_range(pred, lo, hi)
    return ck.hits, ck.primes_scanned


def _cmd_search(cfg: RunConfig, out, kind: str) -> None:
    if cfg.workers > 1 and cfg.checkpoint:
        raise UsageError("checkpointing requires --workers 1")
    if cfg.workers == 1:
        if kind == "wall":
            pred = wall_predicate()
        else:
            pred = wieferich_predicate(parse_quadratic(cfg.base, cfg.field_d),
                                       cfg.field_d)
        ck = search_range(pred, cfg.lo, cfg.hi, cfg.checkpoint,
                          resume=cfg.resume)
        hits, scanned = ck.hits, ck.primes_scanned
    else:
        span = cfg.hi - cfg.lo
        chunk = -(-span // cfg.workers)
        shards = []
        for i in range(cfg.workers):
            a = cfg.lo + i * chunk
            b = min(cfg.hi, a + chunk)
            if a < b:
                shards.append((kind, cfg.base, cfg.field_d, a, b))
        hits, scanned = [], 0
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            for shard_hits, shard_scanned in pool.map(_scan_shard, shards):
                hits.extend(shard_hits)  # shards are ordered, hits stay sorted
                scanned += shard_scanned
    if cfg.emit == "json":
        for hit in hits:
            print(_json_line(hit), file=out)
        print(_json_line({"range": [cfg.lo, cfg.hi], "hits": len(hits),
                          "primes_scanned": scanned}), file=out)
    else:
        if kind == "wall":
            rows = [(h["p"], h["pi_p"], h["pi_p2"]) for h in hits]
            _emit_csv("search-wss", ["p", "pi_p", "pi_p2"], rows, out)
        else:
            rows = [(h["p"], h["ideals"], h["aggregate"]) for h in hits]
            _emit_csv("search-wieferich", ["p", "ideals", "aggregate"], rows,
                      out)
        print(f"# primes_scanned: {scanned}", file=out)


def _cmd_certify(cfg: RunConfig, out) -> None:
    g = parse_quadratic(cfg.base, cfg.field_d)
    field_d = g.field.d if g.field is not None else None
    n_max = witness_limit(g, cfg.bound)
    kept = set()
    skipped = []
    rows = []
    for n in range(1, n_max + 1):
        try:
            certs = certificate_for_n(g, n)
        except FactorizationError:
            skipped.append(n)
            continue
        for c in certs:
            if c.prime_ideal.norm > cfg.bound:
                continue
            kept.add(c.prime_ideal.label())
            rows.append({
                "gamma": format_quadratic(g), "field_d": field_d,
                "n": c.n, "p": c.p, "ideal_kind": c.prime_ideal.kind,
                "order_check": c.order_check, "square_check": c.square_check,
            })
    if cfg.emit == "json":
        for row in rows:
            print(_json_line(row), file=out)
        print(_json_line({"bound": cfg.bound, "certified": len(kept),
                          "skipped": skipped}), file=out)
    else:
        header = ["gamma", "field_d", "n", "p", "ideal_kind", "order_check",
                  "square_check"]
        _emit_csv("certify", header,
                  [tuple("" if r[k] is None else r[k] for k in header)
                   for r in rows], out)
        print(f"# certified: {len(kept)}", file=out)


def _cmd_abc_quality(cfg: RunConfig, out) -> None:
    g = parse_quadratic(cfg.base, cfg.field_d)
    one = as_element(1, g.field)
    rows = []
    power = one
    for n in range(1, cfg.n_to + 1):
        power = power * g
        if n < cfg.n_from:
            continue
        triple = (power, as_element(-1, g.field), one - power)
        h = triple_height(*triple, precision=cfg.precision)
        r = radical(*triple, precision=cfg.precision)
        q = abc_quality(*triple, precision=cfg.precision)
        rows.append((n, h, r, q))
    if cfg.emit == "csv":
        _emit_csv("abc-quality", ["n", "h", "rad", "q"], rows, out)
    else:
        for n, h, r, q in rows:
            print(_json_line({"n": n, "h": h, "rad": r, "q": q}), file=out)


def _cmd_phi_ratio(cfg: RunConfig, out) -> None:
    g = parse_quadratic(cfg.base, cfg.field_d)
    rows = []
    for n in range(cfg.n_from, cfg.n_to + 1):
        pr = phi_norm_ratio(g, n, precision=cfg.precision)
        rows.append((n, pr.ratio, pr.target))
    if cfg.emit == "csv":
        _emit_csv("phi-ratio", ["n", "ratio", "target"], rows, out)
    else:
        for n, ratio, target in rows:
            print(_json_line({"n": n, "ratio": ratio, "target": target}),
                  file=out)


def _cmd_rank(cfg: RunConfig, out) -> None:
    gens = [parse_quadratic(s, cfg.field_d) for s in cfg.gens]
    rep = multiplicative_rank(gens)
    print(_json_line({
        "generators": list(cfg.gens),
        "support_primes": list(rep.support_primes),
        "valuation_matrix": [list(r) for r in rep.valuation_matrix],
        "kernel_basis": [list(r) for r in rep.kernel_basis],
        "torsion_relations": [list(r) for r in rep.torsion_relations],
        "free_rank": rep.free_rank,
    }), file=out)


def _cmd_heuristic(cfg: RunConfig, out) -> None:
    gens = [parse_quadratic(s, cfg.field_d) for s in cfg.gens]
    ys = []
    y = 10
    while y < cfg.bound:
        ys.append(y)
        y *= 10
    if cfg.bound >= 2:
        ys.append(cfg.bound)
    rows = [(y, expected_count(gens, y)) for y in ys]
    if cfg.emit == "csv":
        _emit_csv("heuristic", ["Y", "expected_count"], rows, out)
    else:
        for y, v in rows:
            print(_json_line({"Y": y, "expected_count": v}), file=out)


def run(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    if cfg.subcommand == "period":
        _cmd_period(cfg, out)
    elif cfg.subcommand == "search-wss":
        _cmd_search(cfg, out, "wall")
    elif cfg.subcommand == "search-wieferich":
        _cmd_search(cfg, out, "wieferich")
    elif cfg.subcommand == "certify":
        _cmd_certify(cfg, out)
    elif cfg.subcommand == "abc-quality":
        _cmd_abc_quality(cfg, out)
    elif cfg.subcommand == "phi-ratio":
        _cmd_phi_ratio(cfg, out)
    elif cfg.subcommand == "rank":
        _cmd_rank(cfg, out)
    elif cfg.subcommand == "heuristic":
        _cmd_heuristic(cfg, out)
    else:  # unreachable: argparse restricts the choices
        raise UsageError(f"unknown subcommand {cfg.subcommand!r}")
    return 0


def main(argv=None) -> int:
    try:
        cfg = parse_args(sys.argv[1:] if argv is None else argv)
        return run(cfg)
    except QuadrecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
