"""Command-line front end.

Subcommands cover the counting tables, explicit enumerations, cumulant
computations with selectable routes, the series identities, and
self-contained verification suites.  Output defaults to JSON (one
document per result record); rationals are always rendered as "p/q"
strings so nothing is ever rounded.  Exit codes: 0 success, 1 a
verification or route-agreement failure, 2 usage errors, 3 a resource
cap refused the request."""

from __future__ import annotations

import argparse
import itertools
import json
import random
import re
import sys
from fractions import Fraction

from freecactus import cactus as cactus_mod
from freecactus.cumulants import (
    CumulantSpec,
    WeightMatrix,
    anticommutator_cumulant,
    anticommutator_cumulant_graphwise,
    even_anticommutator,
    format_rational,
    free_poisson_anticommutator_polynomial,
    oracle_anticommutator_cumulants,
    oracle_quadratic_cumulants,
    parse_spec,
    product_cumulant,
    quadratic_form_cumulant,
    random_explicit_spec,
    semicircular_anticommutator,
)
from freecactus.errors import ResourceCapError
from freecactus.partitions import (
    Partition,
    catalan,
    classify,
    enumerate_nc,
    enumerate_y,
    interval_pairing,
    join,
    kreweras,
    level_counts,
    x_membership,
    y_membership,
)
from freecactus.series import (
    DEFAULT_SERIES_ORDER,
    TruncatedSeries,
    cauchy_polynomial_residual,
    check_functional_equations,
    free_poisson_pair_cumulants,
    minverse_closed_form,
    r_m_transfer,
    y_count_recursive,
    y_series,
)

_NUMERIC = re.compile(r"-?[0-9]+(/[0-9]+)?$")


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def parse_range(text: str) -> list[int]:
    """Parse "a..b" (inclusive) or a single "n" into a list of orders."""
    if ".." in text:
        lo_text, hi_text = text.split("..", 1)
        lo, hi = int(lo_text), int(hi_text)
    else:
        lo = hi = int(text)
    if lo < 1 or hi < lo:
        raise ValueError(f"bad order range {text!r}; need 1 <= a <= b")
    return list(range(lo, hi + 1))


# ------------------------------------------------------------------ output


def _is_numeric_cell(value) -> bool:
    if isinstance(value, bool):
        return False
    if isinstance(value, int):
        return True
    return isinstance(value, str) and bool(_NUMERIC.match(value))


def _render_table(rows: list[dict]) -> str:
    """Aligned columns: integers and rationals right-aligned, everything
    else left-aligned, nothing abbreviated."""
    if not rows:
        return ""
    headers = list(rows[0])
    cells = [[_cell_text(r.get(h)) for h in headers] for r in rows]
    widths = [
        max(len(h), *(len(row[i]) for row in cells)) for i, h in enumerate(headers)
    ]
    numeric = [
        all(_is_numeric_cell(r.get(h)) for r in rows) for h in headers
    ]
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)).rstrip()
    ]
    for row in cells:
        parts = []
        for i, text in enumerate(row):
            parts.append(text.rjust(widths[i]) if numeric[i] else text.ljust(widths[i]))
        lines.append("  ".join(parts).rstrip())
    return "\n".join(lines)


def _cell_text(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, (list, tuple)):
        return " ".join(_cell_text(v) for v in value)
    return str(value)


def _emit_value(value, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(value))
    elif isinstance(value, (list, tuple)):
        print(" ".join(str(v) for v in value))
    else:
        print(value)


def _emit_records(records: list[dict], fmt: str) -> None:
    if fmt == "json":
        for record in records:
            print(json.dumps(record))
    else:
        print(_render_table(records))


def _emit_object(obj: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(obj))
    else:
        for key, value in obj.items():
            print(f"{key}: {_cell_text(value)}")


# ------------------------------------------------------------------- count


def cmd_count(args) -> int:
    if args.kind == "y":
        _emit_value(y_count_recursive(args.m), args.format)
    elif args.kind == "levels":
        _emit_value(level_counts(args.m, cap=args.cap), args.format)
    elif args.kind == "nc":
        _emit_value(catalan(args.m), args.format)
    else:
        classes = cactus_mod.enumerate_oriented_cacti(
            args.n, bipartite_only=args.bipartite, cap=args.cap
        )
        _emit_value(len(classes), args.format)
    return 0


# --------------------------------------------------------------- enumerate


def cmd_enumerate(args) -> int:
    if args.kind == "partitions":
        parts = list(enumerate_nc(args.m, cap=args.cap))
        if args.format == "json":
            for p in parts:
                print(json.dumps(p.to_json_obj()))
        else:
            for p in parts:
                print(p.to_text())
        return 0
    if args.kind == "y":
        records = []
        for p in enumerate_y(args.m, cap=args.cap):
            decomposition = y_membership(p)
            records.append(
                {
                    "partition": (
                        p.to_json_obj() if args.format == "json" else p.to_text()
                    ),
                    "level": decomposition.level,
                }
            )
        _emit_records(records, args.format)
        return 0
    classes = cactus_mod.enumerate_oriented_cacti(
        args.n, bipartite_only=args.bipartite, cap=args.cap
    )
    records = []
    for rep, members in classes.values():
        obj = rep.to_json_obj()
        obj["class_size"] = len(members)
        obj["members"] = [p.to_text() for p in members]
        records.append(obj)
    if args.format == "json":
        for record in records:
            print(json.dumps(record))
    else:
        rows = [
            {
                "signature": " ".join(f"{v},{e}" for v, e in r["signature"]),
                "fC": r["fC"],
                "bipartite": r["bipartition"] is not None,
                "class_size": r["class_size"],
                "members": "; ".join(r["members"]),
            }
            for r in records
        ]
        print(_render_table(rows))
    return 0


# --------------------------------------------------------------- cumulants


def _route_records(args, orders, compute_partition, compute_graph) -> tuple[list[dict], bool]:
    records = []
    all_match = True
    for n in orders:
        if args.route == "both":
            left = compute_partition(n)
            right = compute_graph(n)
            match = left == right
            all_match = all_match and match
            records.append(
                {
                    "n": n,
                    "partition": format_rational(left),
                    "graph": format_rational(right),
                    "match": match,
                }
            )
        else:
            value = (
                compute_graph(n) if args.route == "graph" else compute_partition(n)
            )
            records.append({"n": n, "kappa": format_rational(value)})
    return records, all_match


def cmd_cumulants(args) -> int:
    orders = parse_range(args.n)
    if args.target == "anticommutator":
        a, b = parse_spec(args.a), parse_spec(args.b)
        records, ok = _route_records(
            args,
            orders,
            lambda n: anticommutator_cumulant(a, b, n, cap=args.cap),
            lambda n: anticommutator_cumulant_graphwise(a, b, n, cap=args.cap),
        )
        _emit_records(records, args.format)
        return 0 if ok else 1
    if args.target == "product":
        a, b = parse_spec(args.a), parse_spec(args.b)
        records = [
            {"n": n, "kappa": format_rational(product_cumulant(a, b, n, cap=args.cap))}
            for n in orders
        ]
        _emit_records(records, args.format)
        return 0
    if args.target == "semicircular-anticom":
        a = parse_spec(args.a)
        records = [
            {
                "n": n,
                "kappa": format_rational(
                    semicircular_anticommutator(a, n, cap=args.cap)
                ),
            }
            for n in orders
        ]
        _emit_records(records, args.format)
        return 0
    # quadratic
    specs = tuple(parse_spec(text) for text in args.specs)
    with open(args.weights, "r", encoding="utf-8") as handle:
        weights = WeightMatrix.from_json_obj(json.load(handle))
    records, ok = _route_records(
        args,
        orders,
        lambda n: quadratic_form_cumulant(
            specs, weights, n, route="partition", cap=args.cap
        ),
        lambda n: quadratic_form_cumulant(
            specs, weights, n, route="graph", cap=args.cap
        ),
    )
    _emit_records(records, args.format)
    return 0 if ok else 1


# ------------------------------------------------------------------ series


def cmd_series(args) -> int:
    if args.kind == "counts":
        a, b = y_series(args.order)
        _emit_object({"even": a.to_json_obj(), "odd": b.to_json_obj()}, args.format)
        return 0
    if args.kind == "check":
        report = check_functional_equations(*y_series(args.order))
        _emit_object(report.to_json_obj(), args.format)
        return 0 if report.all_pass else 1
    if args.kind == "minverse":
        _emit_value(minverse_closed_form(args.order).to_json_obj(), args.format)
        return 0
    # cauchy
    residual = cauchy_polynomial_residual(args.moments)
    all_zero = all(c == 0 for c in residual)
    _emit_object(
        {"residual": [format_rational(c) for c in residual], "all_zero": all_zero},
        args.format,
    )
    return 0 if all_zero else 1


# ------------------------------------------------------------------ verify


def _check(name, fn):
    try:
        detail = fn()
        return {"name": name, "pass": True, **({"detail": detail} if detail else {})}
    except AssertionError as exc:
        return {"name": name, "pass": False, "detail": str(exc) or "assertion failed"}


def _suite_kreweras(cap):
    def roundtrip_and_size():
        for m in range(1, 7):
            for p in enumerate_nc(m, cap=cap):
                k = kreweras(p)
                assert kreweras(k, direction="inverse") == p, p.to_text()
                assert len(k) == m + 1 - len(p), p.to_text()
        return "m <= 6 exhaustive"

    def parity_swap():
        for n in (1, 2):
            for p in enumerate_nc(2 * n, cap=cap):
                before = classify(p)
                after = classify(kreweras(p))
                assert before.even == after.parity_preserving, p.to_text()
        return "even ground sets 2 and 4"

    def complement_of_family():
        for n in range(1, 5):
            from_y = {
                kreweras(s).to_text() for s in enumerate_y(2 * n, cap=cap)
            }
            direct = {
                p.to_text()
                for p in enumerate_nc(2 * n, cap=cap)
                if x_membership(p)
            }
            assert from_y == direct, f"2n = {2 * n}"
        return "complement image matches the graph test, n <= 4"

    return [
        ("kreweras.roundtrip_and_size", roundtrip_and_size),
        ("kreweras.parity_swap", parity_swap),
        ("kreweras.complement_of_family", complement_of_family),
    ]


def _suite_cactus(cap):
    def connectivity_is_join():
        for n in range(1, 5):
            for p in enumerate_nc(2 * n, cap=cap):
                g = cactus_mod.build_graph(p)
                joined = join(p, interval_pairing(n))
                assert cactus_mod.is_connected(g) == (len(joined) == 1), p.to_text()
        return "n <= 4"

    def connected_validates():
        for n in range(1, 5):
            for p in enumerate_nc(2 * n, cap=cap):
                g = cactus_mod.build_graph(p)
                if cactus_mod.is_connected(g):
                    assert cactus_mod.validate_cactus(g).is_cactus, p.to_text()
        return "every connected block graph is a cactus, n <= 4"

    def euler_relation():
        for n in range(1, 5):
            for p in enumerate_nc(2 * n, cap=cap):
                g = cactus_mod.build_graph(p)
                if not cactus_mod.is_connected(g):
                    continue
                count = cactus_mod.validate_cactus(g).simple_cycle_count
                assert count == len(kreweras(p, "inverse")) - n, p.to_text()
        return "simple cycles = inverse complement blocks - n, n <= 4"

    def class_sizes():
        for n in range(1, 5):
            classes = cactus_mod.enumerate_oriented_cacti(n, cap=cap)
            total = 0
            for rep, members in classes.values():
                assert len(members) == 2**rep.f_c, rep.signature
                total += len(members)
            connected = sum(
                1
                for p in enumerate_nc(2 * n, cap=cap)
                if cactus_mod.is_connected(cactus_mod.build_graph(p))
            )
            assert total == connected, f"n = {n}"
            trees = sum(
                1 for rep, _m in classes.values() if not any(rep.edge_rigidity)
            )
            assert trees == catalan(n), f"tree classes at n = {n}"
        return "sizes 2^fC, union complete, trees Catalan, n <= 4"

    return [
        ("cactus.connectivity_is_join", connectivity_is_join),
        ("cactus.connected_validates", connected_validates),
        ("cactus.euler_relation", euler_relation),
        ("cactus.class_sizes", class_sizes),
    ]


def _suite_formulas(seed, cap, oracle_cap):
    rng = random.Random(seed)

    def routes_agree():
        for _ in range(5):
            a = random_explicit_spec(rng, 4)
            b = random_explicit_spec(rng, 4)
            from_oracle = oracle_anticommutator_cumulants(a, b, 3, cap=oracle_cap)
            for n in (1, 2, 3):
                direct = anticommutator_cumulant(a, b, n, cap=cap)
                graph = anticommutator_cumulant_graphwise(a, b, n, cap=cap)
                assert direct == graph == from_oracle[n - 1], (a.name, b.name, n)
        return "5 random pairs, n <= 3, three routes"

    def quadratic_routes_agree():
        for k in (2, 3):
            specs = tuple(random_explicit_spec(rng, 4) for _ in range(k))
            rows = [[Fraction(0)] * k for _ in range(k)]
            for i in range(k):
                for j in range(i, k):
                    rows[i][j] = rows[j][i] = Fraction(
                        rng.randint(-2, 2), rng.choice((1, 2))
                    )
            weights = WeightMatrix(tuple(tuple(r) for r in rows))
            from_oracle = oracle_quadratic_cumulants(
                specs, weights, 3, cap=oracle_cap
            )
            for n in (1, 2, 3):
                p = quadratic_form_cumulant(
                    specs, weights, n, route="partition", cap=cap
                )
                g = quadratic_form_cumulant(specs, weights, n, route="graph", cap=cap)
                assert p == g == from_oracle[n - 1], (k, n)
        return "k = 2 and 3, n <= 3, both routes and oracle"

    def special_cases():
        values = []
        for _ in range(4):
            values.append(Fraction(0))
            values.append(Fraction(rng.randint(-3, 3), rng.choice((1, 2, 3))))
        even_spec = CumulantSpec.explicit(values)
        partner_values = [Fraction(0) if i % 2 == 0 else Fraction(rng.randint(-3, 3)) for i in range(8)]
        partner = CumulantSpec.explicit(partner_values)
        for m in range(1, 7):
            assert even_anticommutator(even_spec, partner, m) == anticommutator_cumulant(
                even_spec, partner, m, cap=cap
            ), m
        general = random_explicit_spec(rng, 5)
        s = CumulantSpec.semicircular()
        for m in range(1, 7):
            assert semicircular_anticommutator(general, m, cap=cap) == anticommutator_cumulant(
                general, s, m, cap=cap
            ), m
        return "even formula and semicircular formula vs the general route, m <= 6"

    def rate_polynomial():
        for n in range(1, 5):
            coeffs = free_poisson_anticommutator_polynomial(n, cap=cap)
            for lam in (Fraction(1), Fraction(2), Fraction(5, 2)):
                spec = CumulantSpec.free_poisson(lam)
                value = sum(d * lam ** (n + 1 - r) for r, d in enumerate(coeffs))
                assert value == anticommutator_cumulant(spec, spec, n, cap=cap), (n, lam)
        return "rate polynomial evaluation, n <= 4"

    return [
        ("formulas.routes_agree", routes_agree),
        ("formulas.quadratic_routes_agree", quadratic_routes_agree),
        ("formulas.special_cases", special_cases),
        ("formulas.rate_polynomial", rate_polynomial),
    ]


def _suite_series():
    def functional_equations():
        report = check_functional_equations(*y_series(10))
        assert report.all_pass, report.failing()
        return "four residuals vanish at order 10"

    def closed_form_inverse():
        kappas = free_poisson_pair_cumulants(9)
        rm = r_m_transfer(kappas, 9)
        inv = minverse_closed_form(9)
        assert inv == rm.M.comp_inverse()
        assert rm.M.compose(inv) == TruncatedSeries.identity(9)
        return "closed form inverts the moment series at order 9"

    def transfer_identity():
        rm = r_m_transfer(free_poisson_pair_cumulants(8), 8)
        one_plus_z = TruncatedSeries.from_coefficients([1, 1], 8)
        assert rm.M.comp_inverse() == rm.R.comp_inverse() / one_plus_z
        return "moment and cumulant inverses agree at order 8"

    def cauchy_polynomial():
        residual = cauchy_polynomial_residual(8)
        assert all(c == 0 for c in residual)
        return "degree-six residual vanishes with 8 moments"

    return [
        ("series.functional_equations", functional_equations),
        ("series.closed_form_inverse", closed_form_inverse),
        ("series.transfer_identity", transfer_identity),
        ("series.cauchy_polynomial", cauchy_polynomial),
    ]


def cmd_verify(args) -> int:
    checks = []
    if args.suite in ("all", "kreweras"):
        checks += _suite_kreweras(args.cap)
    if args.suite in ("all", "cactus"):
        checks += _suite_cactus(args.cap)
    if args.suite in ("all", "formulas"):
        checks += _suite_formulas(args.seed, args.cap, args.oracle_cap)
    if args.suite in ("all", "series"):
        checks += _suite_series()
    results = [_check(name, fn) for name, fn in checks]
    failures = [r["name"] for r in results if not r["pass"]]
    summary = {
        "suite": args.suite,
        "seed": args.seed,
        "passed": len(results) - len(failures),
        "failed": len(failures),
        "failures": failures,
        "checks": results,
    }
    if args.format == "json":
        print(json.dumps(summary))
    else:
        rows = [
            {
                "check": r["name"],
                "pass": r["pass"],
                "detail": r.get("detail", ""),
            }
            for r in results
        ]
        print(_render_table(rows))
        print(f"{summary['passed']} passed, {summary['failed']} failed")
    return 0 if not failures else 1


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        choices=("json", "table"),
        default="json",
        help="output format (default json)",
    )
    common.add_argument(
        "--cap",
        type=_positive_int,
        default=None,
        help="enumeration ground-set cap override",
    )
    common.add_argument(
        "--oracle-cap",
        type=_positive_int,
        default=None,
        help="oracle order cap override",
    )
    common.add_argument(
        "--seed", type=int, default=1729, help="seed for randomized verification"
    )

    parser = argparse.ArgumentParser(
        prog="freecactus",
        description=(
            "Exact free-cumulant calculus for anti-commutators and quadratic "
            "forms in free random variables."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    count = sub.add_parser(
        "count", parents=[common], help="counting tables without enumeration output"
    )
    count.add_argument("kind", choices=("y", "levels", "nc", "cacti"))
    count.add_argument("--m", type=_positive_int, help="ground set size")
    count.add_argument("--n", type=_positive_int, help="edge count for cacti")
    count.add_argument(
        "--bipartite", action="store_true", help="restrict cacti to bipartite classes"
    )
    count.set_defaults(func=cmd_count)

    enum = sub.add_parser(
        "enumerate", parents=[common], help="emit the objects themselves"
    )
    enum.add_argument("kind", choices=("partitions", "y", "cacti"))
    enum.add_argument("--m", type=_positive_int, help="ground set size")
    enum.add_argument("--n", type=_positive_int, help="edge count for cacti")
    enum.add_argument(
        "--bipartite", action="store_true", help="restrict cacti to bipartite classes"
    )
    enum.set_defaults(func=cmd_enumerate)

    cum = sub.add_parser(
        "cumulants", parents=[common], help="exact cumulants of combined variables"
    )
    cum.add_argument(
        "target",
        choices=("anticommutator", "product", "semicircular-anticom", "quadratic"),
    )
    cum.add_argument("--a", help="first distribution spec")
    cum.add_argument("--b", help="second distribution spec")
    cum.add_argument(
        "--specs", nargs="+", help="distribution specs for the quadratic form"
    )
    cum.add_argument("--weights", help="JSON weight matrix file")
    cum.add_argument("--n", required=True, help="order or inclusive range a..b")
    cum.add_argument(
        "--route",
        choices=("partition", "graph", "both"),
        default="partition",
        help="summation route where two exist",
    )
    cum.set_defaults(func=cmd_cumulants)

    ser = sub.add_parser(
        "series", parents=[common], help="counting series and their identities"
    )
    ser.add_argument("kind", choices=("counts", "check", "minverse", "cauchy"))
    ser.add_argument(
        "--order",
        type=_positive_int,
        default=DEFAULT_SERIES_ORDER,
        help="truncation order",
    )
    ser.add_argument(
        "--moments",
        type=_positive_int,
        default=8,
        help="number of moments feeding the Cauchy residual",
    )
    ser.set_defaults(func=cmd_series)

    ver = sub.add_parser(
        "verify", parents=[common], help="run the self-verification suites"
    )
    ver.add_argument(
        "--suite",
        choices=("all", "kreweras", "cactus", "formulas", "series"),
        default="all",
    )
    ver.set_defaults(func=cmd_verify)
    return parser


def _validate(parser, args) -> None:
    if args.command == "count":
        if args.kind in ("y", "levels", "nc") and args.m is None:
            parser.error(f"count {args.kind} requires --m")
        if args.kind == "cacti" and args.n is None:
            parser.error("count cacti requires --n")
    if args.command == "enumerate":
        if args.kind in ("partitions", "y") and args.m is None:
            parser.error(f"enumerate {args.kind} requires --m")
        if args.kind == "cacti" and args.n is None:
            parser.error("enumerate cacti requires --n")
    if args.command == "cumulants":
        if args.target in ("anticommutator", "product") and not (args.a and args.b):
            parser.error(f"cumulants {args.target} requires --a and --b")
        if args.target == "semicircular-anticom" and not args.a:
            parser.error("cumulants semicircular-anticom requires --a")
        if args.target == "quadratic" and not (args.specs and args.weights):
            parser.error("cumulants quadratic requires --specs and --weights")
        if args.target in ("product", "semicircular-anticom") and args.route != "partition":
            parser.error(f"cumulants {args.target} has a single route")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    try:
        return args.func(args)
    except ResourceCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
