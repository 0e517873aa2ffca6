"""
Command line front end for factor_bounds.

Every subcommand prints a rich table by default and a JSON document with
``--json``. Exit codes: 0 on success, 1 on bad input or an infeasible
configuration, 2 when a fixture fails verification.
"""

import json
import pathlib
import sys
from collections.abc import Callable, Sequence
from typing import Any

import click
from pydantic import ValidationError
from rich.console import Console, RenderableType
from rich.table import Table

from factor_bounds.bounds import (
    METHODS,
    BoundReport,
    combined_report,
    min_l2_multiple,
    sf_best,
    sf_btw,
    sf_mignotte,
    sf_mignotte_refined,
)
from factor_bounds.cyclotomic import cyclo_height_records, cyclotomic, cyclotomic_height
from factor_bounds.exceptions import (
    FactorBoundsError,
    FixtureVerificationError,
    PolynomialSyntaxError,
)
from factor_bounds.fixtures import FixtureReport, verify_directory, verify_fixture
from factor_bounds.logs import configure_logging
from factor_bounds.parsing import format_expr, parse, to_json
from factor_bounds.polycore import IntPoly, height
from factor_bounds.rootbounds import (
    DEFAULT_CAP_BITS,
    cauchy_bound,
    knuth_bound,
    mahler_upper,
    refined_root_bound,
    zassenhaus_bound,
)
from factor_bounds.search.cases import FactorizationCase, ratio
from factor_bounds.search.conjectures import amoroso_sandwich, conjecture_power_check
from factor_bounds.search.cyclosets import DEFAULT_DIVISOR_CAP, xd1_subset_search
from factor_bounds.search.families import (
    family_n_quadratic,
    family_power_symmetric,
    inflate_chain,
    quadratic_family_conjecture,
)
from factor_bounds.search.multiples import height1_multiple_search
from factor_bounds.search.pairs import SearchConfig, pair_search
from factor_bounds.search.unitcircle import u_d_height_lower_bound, unit_circle_factor
from factor_bounds.settings import TABLE_DEPTH, BoundSettings

METHOD_LABELS = {
    "binomial": "Binomial",
    "mignotte": "Mignotte",
    "beauzamy": "Beauzamy",
    "knuth_cohen": "Knuth-Cohen",
    "combined": "Combined",
}

SYMMETRY_CHOICES = {
    "none": "none",
    "palindromic": "palindromic",
    "star": "star_symmetric",
    "both": "palindromic_star_symmetric",
}


class PolynomialType(click.ParamType):
    """A polynomial given as an expression or a bracketed coefficient list.

    ``-`` reads the polynomial from standard input.
    """

    name = "polynomial"

    def convert(
        self, value: Any, param: click.Parameter | None, ctx: click.Context | None
    ) -> IntPoly:
        if isinstance(value, IntPoly):
            return value
        if value == "-":
            value = click.get_text_stream("stdin").read()
        try:
            return parse(value)
        except PolynomialSyntaxError as e:
            self.fail(str(e), param, ctx)


class IntListType(click.ParamType):
    """Comma separated positive integers, e.g. ``2,18``."""

    name = "integers"

    def convert(
        self, value: Any, param: click.Parameter | None, ctx: click.Context | None
    ) -> tuple[int, ...]:
        if isinstance(value, tuple):
            return value
        try:
            values = tuple(int(item) for item in str(value).split(",") if item.strip())
        except ValueError:
            self.fail(f"'{value}' is not a comma separated list of integers", param, ctx)
        if not values or min(values) < 1:
            self.fail(f"'{value}' must list positive integers", param, ctx)
        return values


POLYNOMIAL = PolynomialType()
INT_LIST = IntListType()


class FactorBoundsGroup(click.Group):
    """Map package errors onto exit codes."""

    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except FixtureVerificationError as e:
            click.echo(f"Error: {e}", err=True)
            ctx.exit(2)
        except (FactorBoundsError, ValidationError) as e:
            click.echo(f"Error: {e}", err=True)
            ctx.exit(1)
        except click.UsageError as e:
            e.show()
            ctx.exit(1)


def _render(*renderables: RenderableType) -> str:
    console = Console(width=160, color_system=None, soft_wrap=True)
    with console.capture() as capture:
        for renderable in renderables:
            console.print(renderable)
    return capture.get()


def _emit(payload: Any, as_json: bool, human: Callable[[], str]) -> None:
    if as_json:
        click.echo(json.dumps(payload, sort_keys=True, indent=2))
    else:
        click.echo(human(), nl=False)


def _settings(depth: int, cap_bits: int, threads: int) -> BoundSettings:
    return BoundSettings(graeffe_depth=depth, cap_bits=cap_bits, workers=threads)


def json_option(command: Callable[..., Any]) -> Callable[..., Any]:
    return click.option(
        "--json", "as_json", is_flag=True, help="Emit JSON instead of a table"
    )(command)


def cap_bits_option(command: Callable[..., Any]) -> Callable[..., Any]:
    return click.option(
        "--cap-bits",
        default=DEFAULT_CAP_BITS,
        show_default=True,
        help="Coefficient size at which Graeffe switches to majorants",
    )(command)


def bound_table(report: BoundReport, title: str | None = None) -> Table:
    """
    Build the comparison table of a bound report.

    Args:
        report: Method vectors and their combination
        title: Optional table title

    Returns:
        Table with one row per method, the Combined row last, columns from
        x^delta down to x^0 and the overall bound
    """
    table = Table(title=title)
    table.add_column("Method")
    for power in range(report.delta, -1, -1):
        table.add_column(f"x^{power}", justify="right")
    table.add_column("Overall", justify="right")
    for name, vector in [*report.vectors.items(), ("combined", report.combined)]:
        table.add_row(
            METHOD_LABELS.get(name, name),
            *(str(entry) for entry in vector.entries_desc),
            str(vector.overall),
        )
    return table


def render_bound_table(report: BoundReport) -> str:
    """Render a bound report as plain text."""
    return _render(bound_table(report))


def _case_table(cases: Sequence[FactorizationCase], title: str) -> Table:
    table = Table(title=title)
    table.add_column("Product")
    table.add_column("Factors")
    table.add_column("Heights", justify="right")
    table.add_column("ht(f)", justify="right")
    table.add_column("Ratio", justify="right")
    for case in cases:
        table.add_row(
            format_expr(case.product),
            "\n".join(format_expr(g) for g in case.factors),
            ", ".join(str(h) for h in case.heights),
            str(case.product_height),
            str(ratio(case)),
        )
    return table


def _key_value_table(rows: Sequence[tuple[str, str]], title: str | None = None) -> Table:
    table = Table(title=title, show_header=False)
    table.add_column("Quantity")
    table.add_column("Value", justify="right")
    for key, value in rows:
        table.add_row(key, value)
    return table


@click.group(cls=FactorBoundsGroup)
@click.option("-v", "--verbose", count=True, help="-v for progress, -vv for debug logs")
@click.version_option(package_name="factor-bounds")
def cli(verbose: int) -> None:
    """Certified coefficient bounds for factors of integer polynomials."""
    # coefficients and heights are printed in full
    sys.set_int_max_str_digits(0)
    configure_logging(verbose)


@cli.command()
@click.argument("polynomial", type=POLYNOMIAL)
@click.option("--degree", "-d", "delta", type=int, required=True, help="Degree of the factor")
@click.option(
    "--methods",
    default=",".join(METHODS),
    show_default=True,
    help="Comma separated subset of the bound methods",
)
@click.option("--threads", default=1, show_default=True, help="Threads for the method vectors")
@click.option("--depth", default=TABLE_DEPTH, show_default=True, help="Graeffe depth")
@cap_bits_option
@click.option("--audit", is_flag=True, help="Also print the root bounds and norms used")
@json_option
def bounds(
    polynomial: IntPoly,
    delta: int,
    methods: str,
    threads: int,
    depth: int,
    cap_bits: int,
    audit: bool,
    as_json: bool,
) -> None:
    """Degree-aware coefficient bounds for a factor of POLYNOMIAL."""
    selected = [m.strip() for m in methods.split(",") if m.strip()]
    unknown = sorted(set(selected) - set(METHODS))
    if unknown:
        raise click.BadParameter(
            f"unknown method(s) {', '.join(unknown)}; choose from {', '.join(METHODS)}",
            param_hint="--methods",
        )
    report = combined_report(polynomial, delta, selected, _settings(depth, cap_bits, threads))

    def human() -> str:
        parts: list[RenderableType] = [bound_table(report)]
        if audit:
            parts.append(_key_value_table(sorted(report.audit.items()), "Audit"))
        return _render(*parts)

    _emit(report.to_json(), as_json, human)


@cli.command()
@click.argument("polynomial", type=POLYNOMIAL)
@click.option("--degrees", type=INT_LIST, help="Admissible factor degrees, e.g. 2,18")
@click.option("--depth", default=TABLE_DEPTH, show_default=True, help="Graeffe depth")
@cap_bits_option
@json_option
def sfbound(
    polynomial: IntPoly,
    degrees: tuple[int, ...] | None,
    depth: int,
    cap_bits: int,
    as_json: bool,
) -> None:
    """Single-factor bounds: at least one factor of POLYNOMIAL is no taller."""
    settings = _settings(depth, cap_bits, 1)
    results = [sf_mignotte(polynomial, settings), sf_mignotte_refined(polynomial, settings)]
    if len(polynomial) - 1 >= 3:
        results.append(sf_btw(polynomial, settings))
    best = sf_best(polynomial, degrees, settings)
    payload = {
        "bounds": {result.method: str(result.value) for result in results},
        "best": {"method": best.method, "value": str(best.value)},
    }

    def human() -> str:
        rows = [(result.method, str(result.value)) for result in results]
        rows.append((f"best ({best.method})", str(best.value)))
        return _render(_key_value_table(rows, "Single-factor bounds"))

    _emit(payload, as_json, human)


@cli.command()
@click.argument("polynomial", type=POLYNOMIAL)
@click.option("--depth", type=int, default=None, help="Graeffe depth (automatic if omitted)")
@cap_bits_option
@json_option
def rootbound(polynomial: IntPoly, depth: int | None, cap_bits: int, as_json: bool) -> None:
    """Upper bounds on the root moduli of POLYNOMIAL."""
    refined = refined_root_bound(polynomial, depth, cap_bits)
    payload = {
        "knuth": str(knuth_bound(polynomial)),
        "zassenhaus": str(zassenhaus_bound(polynomial)),
        "cauchy": str(cauchy_bound(polynomial).rho),
        "refined": {
            "rho": str(refined.rho),
            "method": refined.method,
            "graeffe_depth": refined.graeffe_depth,
        },
    }

    def human() -> str:
        rows = [(name, payload[name]) for name in ("knuth", "zassenhaus", "cauchy")]
        rows.append(
            (f"refined ({refined.method}, depth {refined.graeffe_depth})", str(refined.rho))
        )
        return _render(_key_value_table(rows, "Root bounds"))

    _emit(payload, as_json, human)


@cli.command()
@click.argument("polynomial", type=POLYNOMIAL)
@click.option("--depth", type=int, default=None, help="Graeffe depth (automatic if omitted)")
@cap_bits_option
@json_option
def mahler(polynomial: IntPoly, depth: int | None, cap_bits: int, as_json: bool) -> None:
    """Certified upper bound on the Mahler measure of POLYNOMIAL."""
    estimate = mahler_upper(polynomial, depth, cap_bits)
    payload = {"upper": str(estimate.upper), "graeffe_depth": estimate.graeffe_depth}
    _emit(
        payload,
        as_json,
        lambda: f"M(f) <= {estimate.upper} (Graeffe depth {estimate.graeffe_depth})\n",
    )


@cli.command("cyclotomic")
@click.argument("index", type=click.IntRange(min=1))
@click.option("--height-only", is_flag=True, help="Print only the height")
@json_option
def cyclotomic_command(index: int, height_only: bool, as_json: bool) -> None:
    """The INDEX-th cyclotomic polynomial."""
    if height_only:
        value = cyclotomic_height(index)
        _emit({"index": index, "height": str(value)}, as_json, lambda: f"{value}\n")
        return
    phi = cyclotomic(index)
    payload = {"index": index, "height": str(height(phi)), **to_json(phi)}
    _emit(payload, as_json, lambda: f"{format_expr(phi)}\n")


@cli.command("cyclo-records")
@click.option(
    "--max-index", type=click.IntRange(min=1), required=True, help="Largest index scanned"
)
@json_option
def cyclo_records(max_index: int, as_json: bool) -> None:
    """Indices where the height of the cyclotomic polynomials reaches a new maximum."""
    records = cyclo_height_records(max_index)
    payload = [{"index": n, "height": str(h)} for h, n in records]

    def human() -> str:
        table = Table(title=f"Height records up to {max_index}")
        table.add_column("Index", justify="right")
        table.add_column("Height", justify="right")
        for h, n in records:
            table.add_row(str(n), str(h))
        return _render(table)

    _emit(payload, as_json, human)


@cli.command("xd1-max")
@click.argument("d", type=click.IntRange(min=1))
@click.option(
    "--divisor-cap",
    default=DEFAULT_DIVISOR_CAP,
    show_default=True,
    help="Refuse d with more divisors than this",
)
@json_option
def xd1_max(d: int, divisor_cap: int, as_json: bool) -> None:
    """Tallest factor of x^D - 1 in Z[x]."""
    result = xd1_subset_search(d, divisor_cap)
    payload = {
        "d": d,
        "height": str(result.height),
        "maximizers": [list(indices) for indices in result.maximizers],
    }

    def human() -> str:
        rows = [("height", str(result.height))]
        rows.extend(
            ("cyclotomic indices", ", ".join(str(n) for n in indices))
            for indices in result.maximizers
        )
        return _render(_key_value_table(rows, f"Tallest factors of x^{d} - 1"))

    _emit(payload, as_json, human)


@cli.command()
@click.argument("paths", nargs=-1, type=click.Path(exists=True, path_type=pathlib.Path))
@click.option(
    "--all", "keep_going", is_flag=True, help="Report every failing file, not just the first"
)
@click.option(
    "--irreducibility",
    is_flag=True,
    help="Also run the weak irreducibility filter on claimed irreducible factors",
)
@json_option
def verify(
    paths: tuple[pathlib.Path, ...], keep_going: bool, irreducibility: bool, as_json: bool
) -> None:
    """Re-verify fixture files or directories (the shipped corpus by default)."""
    reports: list[FixtureReport] = []
    failures: list[FixtureVerificationError] = []
    for path in paths or (None,):
        if path is not None and path.is_file():
            try:
                reports.append(verify_fixture(path, irreducibility))
            except FixtureVerificationError as e:
                if not keep_going:
                    raise
                failures.append(e)
            continue
        found, failed = verify_directory(path, irreducibility, keep_going)
        reports.extend(found)
        failures.extend(failed)

    payload = {
        "fixtures": [report.to_json() for report in reports],
        "failures": [str(failure) for failure in failures],
    }

    def human() -> str:
        table = Table(title="Fixture verification")
        table.add_column("Fixture")
        table.add_column("Rows", justify="right")
        table.add_column("Cases", justify="right")
        table.add_column("Height-only", justify="right")
        for report in reports:
            table.add_row(
                report.fixture,
                str(len(report.outcomes)),
                str(len(report.cases)),
                str(len(report.records)),
            )
        return _render(table)

    _emit(payload, as_json, human)
    if failures:
        for failure in failures:
            click.echo(f"FAILED {failure}", err=True)
        raise FixtureVerificationError(
            "corpus", "-", f"{len(failures)} fixture file(s) failed verification"
        )
    if not as_json:
        click.echo(f"✅ {len(reports)} fixture file(s) verified")


@cli.command("search-ratio")
@click.option("--degree", "-d", type=int, required=True, help="Degree of the product")
@click.option("--height-cap", type=int, required=True, help="Largest factor coefficient")
@click.option(
    "--symmetry",
    type=click.Choice(list(SYMMETRY_CHOICES)),
    default="none",
    show_default=True,
    help="Restrict to palindromic factors, pairs g * star(g), or both",
)
@click.option("--degrees", type=INT_LIST, help="Allowed degrees of the smaller factor")
@click.option("--product-height-cap", type=int, default=None, help="Largest product height")
@click.option(
    "--objective",
    type=click.Choice(["max-ratio", "max-factor-height"]),
    default="max-ratio",
    show_default=True,
)
@click.option("--irreducible", is_flag=True, help="Keep only weakly irreducible factors")
@click.option("--threads", default=1, show_default=True, help="Worker processes")
@json_option
def search_ratio(
    degree: int,
    height_cap: int,
    symmetry: str,
    degrees: tuple[int, ...] | None,
    product_height_cap: int | None,
    objective: str,
    irreducible: bool,
    threads: int,
    as_json: bool,
) -> None:
    """Exhaustive search for factor pairs with the largest ratio."""
    config = SearchConfig(
        degree=degree,
        factor_degrees=degrees,
        height_cap=height_cap,
        product_height_cap=product_height_cap,
        symmetry=SYMMETRY_CHOICES[symmetry],
        objective=objective.replace("-", "_"),
        irreducible=irreducible,
        workers=threads,
    )
    result = pair_search(config)
    if as_json:
        for line in result.to_json_lines():
            click.echo(line)
        return
    click.echo(
        _render(_case_table(result.cases, f"Degree {degree}: best {result.best}")), nl=False
    )


@cli.command("search-h1mult")
@click.argument("n", type=click.IntRange(min=1))
@click.option("--max-degree", type=int, default=64, show_default=True, help="Degree cap")
@json_option
def search_h1mult(n: int, max_degree: int, as_json: bool) -> None:
    """Lowest-degree multiple of (x+1)^N with coefficients in {-1, 0, 1}."""
    found = height1_multiple_search(n, max_degree)
    payload = {
        "n": n,
        "degree": found.degree,
        "multiple": to_json(found.multiple)["coeffs_desc"],
        "cofactor": to_json(found.cofactor)["coeffs_desc"],
        "cofactor_height": str(height(found.cofactor)),
    }

    def human() -> str:
        rows = [
            ("degree", str(found.degree)),
            ("multiple", format_expr(found.multiple)),
            ("cofactor height", str(height(found.cofactor))),
        ]
        return _render(_key_value_table(rows, f"Height-1 multiple of (x+1)^{n}"))

    _emit(payload, as_json, human)


@cli.command()
@click.argument("kind", type=click.Choice(["quadratic", "power", "g_d", "h_d", "u_d", "v_d"]))
@click.argument("n", type=click.IntRange(min=1))
@json_option
def family(kind: str, n: int, as_json: bool) -> None:
    """Members of the explicit families: KIND at parameter N (n, k or d)."""
    if kind in ("quadratic", "power"):
        if kind == "quadratic":
            cases = family_n_quadratic(n)
            extra: dict[str, Any] = {
                "conjecture_partner_weakly_irreducible": quadratic_family_conjecture(n)
            }
        else:
            cases = (family_power_symmetric(n),)
            extra = {}
        payload = {"kind": kind, "n": n, "cases": [case.to_json() for case in cases], **extra}
        _emit(payload, as_json, lambda: _render(_case_table(cases, f"{kind} family, n = {n}")))
        return

    factor = unit_circle_factor(n, kind)
    payload = {
        "kind": kind,
        "d": n,
        "height_low": factor.height_low,
        "height_high": factor.height_high,
    }
    rows = [("height interval", f"[{factor.height_low:.6g}, {factor.height_high:.6g}]")]
    if kind == "u_d":
        payload["height_lower_bound"] = u_d_height_lower_bound(n)
        rows.append(("lower bound", f"{payload['height_lower_bound']:.6g}"))
    _emit(payload, as_json, lambda: _render(_key_value_table(rows, f"{kind}, d = {n}")))


@cli.command()
@click.argument("factors", nargs=-1, required=True, type=POLYNOMIAL)
@click.option(
    "--power", "-k", "powers", type=int, multiple=True, required=True, help="Substitution x -> x^k"
)
@click.option("--check-irreducibility", is_flag=True, help="Weakly check the substituted factors")
@json_option
def inflate(
    factors: tuple[IntPoly, ...], powers: tuple[int, ...], check_irreducibility: bool, as_json: bool
) -> None:
    """f(x) f(x^k1) f(x^k2) ... for the product f of FACTORS."""
    base = FactorizationCase.from_factors(factors, source="command line")
    case = inflate_chain(base, powers, check_irreducibility)
    payload = {
        "degree": len(case.product) - 1,
        "product_height": str(case.product_height),
        "heights": [str(h) for h in case.heights],
        "ratio": str(ratio(case)),
    }

    def human() -> str:
        rows = [
            ("degree", str(payload["degree"])),
            ("product height", payload["product_height"]),
            ("factor heights", ", ".join(payload["heights"])),
            ("ratio", payload["ratio"]),
        ]
        return _render(_key_value_table(rows, f"Inflation by {list(powers)}"))

    _emit(payload, as_json, human)


@cli.command()
@click.argument("polynomial", type=POLYNOMIAL)
@click.option("--power", "-k", type=click.IntRange(min=1), default=2, show_default=True)
@click.option("--sandwich", is_flag=True, help="Also bracket ht(f^k) by the sampled sup norm")
@json_option
def conjecture(polynomial: IntPoly, power: int, sandwich: bool, as_json: bool) -> None:
    """Compare ht(f^k) with C(k, floor(k/2)) ht(f)."""
    check = conjecture_power_check(polynomial, power)
    payload: dict[str, Any] = {
        "k": power,
        "lhs": str(check.lhs),
        "rhs": str(check.rhs),
        "holds": check.holds,
        "equality": check.equality,
    }
    rows = [
        (f"ht(f^{power})", str(check.lhs)),
        (f"C({power}, {power // 2}) ht(f)", str(check.rhs)),
        ("holds", "yes" if check.holds else "no"),
    ]
    if sandwich:
        bracket = amoroso_sandwich(polynomial, power)
        payload["sandwich"] = {
            "lower": bracket.lower,
            "upper": bracket.upper,
            "holds": bracket.holds,
        }
        rows.append(("sup-norm bracket", f"[{bracket.lower:.6g}, {bracket.upper:.6g}]"))
    _emit(payload, as_json, lambda: _render(_key_value_table(rows, "Power height check")))


@cli.command()
@click.argument("polynomial", type=POLYNOMIAL)
@click.option("--degree", "-d", "dhat", type=int, required=True, help="Degree of the cofactor h")
@json_option
def minmul(polynomial: IntPoly, dhat: int, as_json: bool) -> None:
    """Monic rational h of the given degree minimizing |f h|_2 for f = POLYNOMIAL."""
    result = min_l2_multiple(polynomial, dhat)
    payload = {
        "cofactor_desc": [str(c) for c in result.cofactor_desc],
        "l2_squared": str(result.l2_squared),
        "l2": str(result.l2),
    }

    def human() -> str:
        rows = [
            ("cofactor", ", ".join(payload["cofactor_desc"])),
            ("|f h|_2^2", payload["l2_squared"]),
            ("|f h|_2", payload["l2"]),
        ]
        return _render(_key_value_table(rows, "Least 2-norm multiple"))

    _emit(payload, as_json, human)


def run(argv: Sequence[str] | None = None) -> int:
    """
    Run the command line and return its exit code.

    Args:
        argv: Arguments without the program name, ``sys.argv[1:]`` if None

    Returns:
        0 on success, 1 on bad input, 2 on fixture verification failure
    """
    try:
        result = cli.main(
            args=list(argv) if argv is not None else None,
            prog_name="factor-bounds",
            standalone_mode=False,
        )
    except click.ClickException as e:
        # click itself uses 2 for usage errors; here 2 means a fixture failed
        e.show()
        return 1
    except click.Abort:
        click.echo("Aborted!", err=True)
        return 1
    return result if isinstance(result, int) else 0


def main() -> None:
    sys.exit(run())
