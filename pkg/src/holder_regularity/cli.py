"""
Command-line interface for holder_regularity.

Usage:
    holder-regularity analyze --family primal:3,2       # regularity of one member
    holder-regularity analyze --mask "1/4,3/4,3/4,1/4" --offset -2
    holder-regularity table primal 8                    # Table of gamma_{m,l}
    holder-regularity table dual 8 --format csv
    holder-regularity compare primal:2,1 primal:3,2     # ratio constant and gap bound
    holder-regularity simulate primal:3,2 --jmax 30 --check-lemma2
    holder-regularity family dual:2,1 -o mask.json      # exact symbol as a mask file

Exit codes: 0 success, 1 input error, 2 method inapplicable, 3 enclosure failure.
"""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path
from typing import NoReturn, Optional

import click
import pandas as pd
from pydantic import ValidationError

from . import __version__
from .comparisons import compare_families, verify_theorems
from .config import LOG_FORMAT, settings
from .exceptions import InputError, MaskParseError, MethodInapplicableError, RegularityError
from .families import parse_family_spec
from .laurent import LaurentPoly, SymmetricMask, format_rational, parse_rational
from .regularity import analyze, format_gamma, regularity_table
from .schemas import (
    ComparisonDocument,
    MaskFile,
    RegularityReport,
    SimulationDocument,
    TableCell,
    TableDocument,
    make_provenance,
    report_document,
)
from .subdivision import (
    cardinal_samples,
    central_root_estimate,
    central_sequence,
    max_center_check,
    ratio_estimates,
)

__all__ = [
    "cli",
]

logger = logging.getLogger(__name__)


def _exit_with(error: Exception) -> NoReturn:
    code = error.exit_code if isinstance(error, RegularityError) else 1
    click.echo(f"Error: {error}", err=True)
    sys.exit(code)


def parse_mask_string(text: str, offset: int = 0) -> LaurentPoly:
    """
    Parse a comma-separated coefficient list into a symbol.

    Example:
        >>> str(parse_mask_string("1/2,1,1/2", offset=-1))
        'z^-1·(1/2, 1, 1/2)'
    """
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if not parts:
        raise MaskParseError("the mask has no coefficients")
    mask = MaskFile(coeffs=[parse_rational(p) for p in parts], offset=offset)
    return mask.to_laurent()


def load_mask_file(path: str) -> LaurentPoly:
    """Read a MaskFile document ({"coeffs": [...], "offset": n})."""
    text = Path(path).read_text(encoding="utf-8")
    return MaskFile.model_validate_json(text).to_laurent()


def format_report(report: RegularityReport) -> str:
    """Human-readable summary of a regularity report."""
    lines = [
        f"multiplicity of (1+z): {report.multiplicity}",
        f"r = {report.r}, p = {report.p}",
        "difference mask b_0..b_p: " + ", ".join(format_rational(c) for c in report.difference_mask),
        "B(s) coefficients: " + ", ".join(format_rational(c) for c in report.s_poly),
        f"positivity: {report.positivity.kind}",
    ]
    if report.positivity.witness is not None:
        w = report.positivity.witness
        lines.append(f"  root isolated in [{format_rational(w.lo)}, {format_rational(w.hi)}]")
    if report.rho is not None:
        rho = report.rho
        exact = f" (exactly {format_rational(rho.exact)})" if rho.exact is not None else ""
        lines.append(f"rho = {rho.estimate!r} +/- {rho.radius_bound:.3g}{exact}")
        if rho.charpoly:
            lines.append("det(A - lambda I) coefficients: " + ", ".join(format_rational(c) for c in rho.charpoly))
    if report.gamma is not None:
        verdict = "exact regularity" if report.optimal else "lower bound"
        lines.append(f"gamma = {report.gamma:.5f} ({verdict})")
    if report.integer_exponent_caveat:
        lines.append("caveat: log2(rho) is an integer; smoothness C^(gamma - eps) for every eps > 0")
    if report.notes:
        lines.append(f"notes: {report.notes}")
    return "\n".join(lines)


def table_frame(cells: list[TableCell], decimals: Optional[int] = None) -> pd.DataFrame:
    """Lower-triangular layout: rows m, columns l, formatted gamma values."""
    frame = pd.DataFrame(
        [{"m": c.m, "l": c.l, "gamma": format_gamma(c, decimals)} for c in cells]
    )
    table = frame.pivot(index="m", columns="l", values="gamma")
    table.columns = [str(c) for c in table.columns]
    return table


@click.group()
@click.version_option(version=__version__, prog_name="holder-regularity")
@click.option("--log-level", default=None, help="Logging level (defaults to HOLDER_LOG_LEVEL)")
def cli(log_level: Optional[str]):
    """
    Hölder regularity of symmetric subdivision schemes.

    Examples:

        holder-regularity analyze --family primal:3,2

        holder-regularity table dual 8
    """
    logging.basicConfig(
        level=(log_level or settings.log_level).upper(),
        format=LOG_FORMAT,
        stream=sys.stderr,
    )


@cli.command("analyze")
@click.option("--family", "family_spec", default=None, help="Family member, e.g. primal:3,2")
@click.option(
    "--mask", "mask_text", default=None,
    help="Comma-separated coefficients, e.g. 1/4,3/4,3/4,1/4",
)
@click.option("--offset", default=0, type=int, help="Exponent of the first --mask coefficient")
@click.option(
    "--mask-file", type=click.Path(exists=True, dir_okay=False), default=None,
    help="Mask file (JSON)",
)
@click.option(
    "--holds-derived", type=int, default=None,
    help="Use this r instead of the maximal one",
)
@click.option("--json", "as_json", is_flag=True, help="Print the report document as JSON")
def analyze_cmd(family_spec, mask_text, offset, mask_file, holds_derived, as_json):
    """
    Regularity of one scheme.

    Examples:

        holder-regularity analyze --family dual:4,3 --json

        holder-regularity analyze --mask-file quintic.json
    """
    sources = [s for s in (family_spec, mask_text, mask_file) if s is not None]
    if len(sources) != 1:
        _exit_with(InputError("give exactly one of --family, --mask, --mask-file"))

    try:
        if family_spec is not None:
            symbol, source = parse_family_spec(family_spec).symbol(), f"family:{family_spec.strip()}"
        elif mask_text is not None:
            symbol, source = parse_mask_string(mask_text, offset), "mask"
        else:
            symbol, source = load_mask_file(mask_file), f"mask-file:{Path(mask_file).name}"
        report = analyze(symbol, holds_derived=holds_derived)
    except ValidationError as e:
        _exit_with(MaskParseError(f"invalid mask document: {e.errors()[0]['msg']}"))
    except MethodInapplicableError as e:
        if e.report is not None:
            if as_json:
                click.echo(report_document(symbol, e.report, source).model_dump_json(indent=2))
            else:
                click.echo(format_report(e.report))
        _exit_with(e)
    except RegularityError as e:
        _exit_with(e)

    if as_json:
        click.echo(report_document(symbol, report, source).model_dump_json(indent=2))
    else:
        click.echo(format_report(report))


@cli.command("table")
@click.argument("kind", type=click.Choice(["primal", "dual"]))
@click.argument("m_max", type=int)
@click.option(
    "--format", "fmt", type=click.Choice(["text", "csv", "json"]), default="text",
    help="Output format",
)
@click.option("--json", "as_json", is_flag=True, help="Same as --format json")
@click.option("--csv", "as_csv", is_flag=True, help="Same as --format csv")
@click.option("--bspline", is_flag=True, help="Include the l = 0 (B-spline) column")
@click.option(
    "--decimals", type=int, default=None,
    help="Decimal places (defaults to HOLDER_TABLE_DECIMALS)",
)
@click.option(
    "--workers", type=int, default=None,
    help="Worker processes (defaults to HOLDER_TABLE_WORKERS)",
)
@click.option("--verify", is_flag=True, help="Also check the comparison inequalities up to M_MAX")
def table_cmd(kind, m_max, fmt, as_json, as_csv, bspline, decimals, workers, verify):
    """
    Regularity table gamma_{m,l} for 1 <= l < m <= M_MAX.

    Examples:

        holder-regularity table primal 8

        holder-regularity table dual 8 --csv
    """
    fmt = "json" if as_json else "csv" if as_csv else fmt
    decimals = settings.table_decimals if decimals is None else decimals
    if m_max < 2:
        _exit_with(InputError(f"M_MAX must be >= 2, got {m_max}"))

    try:
        cells = regularity_table(kind, m_max, include_bspline=bspline, workers=workers)
    except RegularityError as e:
        _exit_with(e)

    if fmt == "json":
        payload = json.dumps({"kind": kind, "m_max": m_max, "bspline": bspline}, sort_keys=True)
        document = TableDocument(
            kind=kind,
            m_max=m_max,
            decimals=decimals,
            cells=cells,
            provenance=make_provenance(f"table:{kind}", payload),
        )
        click.echo(document.model_dump_json(indent=2))
    elif fmt == "csv":
        click.echo(table_frame(cells, decimals).to_csv(), nl=False)
    else:
        title = f"Regularities for the {kind} pseudo-splines"
        click.echo(f"{title} (rows m, columns l)\n")
        click.echo(table_frame(cells, decimals).to_string(na_rep=""))

    if verify:
        report = verify_theorems(m_max)
        total = sum(report.checks_run.values())
        for check in report.violations:
            click.echo(
                f"VIOLATION {check.statement} (m={check.m}, l={check.l}): "
                f"{check.lower:.6f} <= {check.value:.6f} <= {check.upper:.6f} fails",
                err=True,
            )
        if not report.passed:
            sys.exit(1)
        click.echo(f"verified {total} comparison inequalities: no violations", err=True)


@cli.command("compare")
@click.argument("spec_a")
@click.argument("spec_b")
@click.option("--json", "as_json", is_flag=True, help="Print the comparison document as JSON")
def compare_cmd(spec_a, spec_b, as_json):
    """
    Sharpest C with B_b <= C B_a, and the implied bound gamma_b >= gamma_a + r_b - r_a - log2 C.

    Examples:

        holder-regularity compare primal:2,1 primal:3,2

        holder-regularity compare primal:4,3 dual:4,3
    """
    try:
        den, num = parse_family_spec(spec_a), parse_family_spec(spec_b)
        result = compare_families(den, num)
    except RegularityError as e:
        _exit_with(e)

    if as_json:
        payload = json.dumps({"spec_a": den.label, "spec_b": num.label}, sort_keys=True)
        document = ComparisonDocument(
            spec_a=den.label, spec_b=num.label, result=result, provenance=make_provenance("compare", payload)
        )
        click.echo(document.model_dump_json(indent=2))
        return

    click.echo(f"B[{num.label}] <= C B[{den.label}] on [0, pi]")
    if result.c_star_exact is not None:
        at = format_rational(result.argmax.lo)
        click.echo(f"C* = {format_rational(result.c_star_exact)} (attained at s = {at})")
    else:
        click.echo(f"C* = {result.c_star!r} +/- {result.c_star_radius:.3g}")
    if result.theorem is not None:
        constant = result.c_theorem
        click.echo(f"statement {result.theorem}: C = {format_rational(constant)} ({float(constant)!r})")
    else:
        click.echo("no comparison statement matches this pair")
    if result.gap_bound is not None:
        click.echo(f"gamma[{num.label}] >= gamma[{den.label}] + {result.gap_bound:.5f}")


@cli.command("simulate")
@click.argument("spec")
@click.option(
    "--jmax", type=int, default=None,
    help="Levels of the central recursion (defaults to HOLDER_JMAX_CENTRAL)",
)
@click.option(
    "--check-lemma2", "check_center", is_flag=True,
    help="Check exactly that max |b_jk| sits at k = 0",
)
@click.option(
    "--lemma-jmax", type=int, default=None,
    help="Levels for the max-at-center check (defaults to HOLDER_JMAX_FULL)",
)
@click.option(
    "--samples", "samples_path", type=click.Path(dir_okay=False), default=None,
    help="Write cardinal samples as CSV",
)
@click.option("--levels", type=int, default=6, help="Refinement levels for --samples")
@click.option("--json", "as_json", is_flag=True, help="Print the simulation document as JSON")
@click.option("--csv", "as_csv", is_flag=True, help="Print the central sequence as CSV")
def simulate_cmd(spec, jmax, check_center, lemma_jmax, samples_path, levels, as_json, as_csv):
    """
    Central-coefficient growth against the algebraic spectral radius.

    Examples:

        holder-regularity simulate primal:3,2 --jmax 30

        holder-regularity simulate primal:3,2 --check-lemma2 --jmax 10
    """
    jmax = settings.jmax_central if jmax is None else jmax
    if jmax < 1:
        _exit_with(InputError(f"--jmax must be >= 1, got {jmax}"))
    try:
        family = parse_family_spec(spec)
        report = analyze(family.symbol())
        b = SymmetricMask(tuple(report.difference_mask))
        central = central_sequence(b, jmax)
        ratios = ratio_estimates(central)
        roots = [central_root_estimate(central[: j + 1]) for j in range(1, len(central))]
        lemma_levels = min(jmax, settings.jmax_full) if lemma_jmax is None else lemma_jmax
        center_ok = max_center_check(b, lemma_levels) if check_center else None
        samples = cardinal_samples(family.symbol(), levels) if samples_path else None
    except RegularityError as e:
        _exit_with(e)

    rho = report.rho.estimate
    document = SimulationDocument(
        spec=family.label,
        jmax=jmax,
        central=central,
        ratio_estimates=ratios,
        root_estimates=roots,
        rho_algebraic=rho,
        difference=ratios[-1] - rho,
        max_at_center=center_ok,
        provenance=make_provenance("simulate", json.dumps({"spec": family.label, "jmax": jmax})),
    )

    if samples is not None:
        step = 2.0**-samples.level
        frame = pd.DataFrame(
            {
                "x": [(samples.low + i) * step for i in range(len(samples.values))],
                "value": [float(v) for v in samples.values],
            }
        )
        frame.to_csv(samples_path, index=False)
        logger.info("wrote %d cardinal samples to %s", len(frame), samples_path)

    if as_json:
        click.echo(document.model_dump_json(indent=2))
        return
    if as_csv:
        frame = pd.DataFrame(
            {
                "j": range(len(central)),
                "b_j0": [format_rational(c) for c in central],
                "ratio": [None] + ratios,
                "root": [None] + roots,
            }
        )
        click.echo(frame.to_csv(index=False), nl=False)
        return

    click.echo(f"{family.label}: jmax = {jmax}")
    click.echo(f"b_(jmax,0) / b_(jmax-1,0) = {ratios[-1]!r}")
    click.echo(f"b_(jmax,0)^(1/jmax)       = {roots[-1]!r}")
    click.echo(f"rho (characteristic polynomial) = {rho!r}")
    click.echo(f"difference = {document.difference:.3e}")
    if center_ok is not None:
        click.echo(f"max at center: {'PASS' if center_ok else 'FAIL'} (exact)")


@cli.command("family")
@click.argument("spec")
@click.option(
    "-o", "--output", type=click.Path(dir_okay=False), default=None,
    help="Write the symbol as a mask file",
)
def family_cmd(spec, output):
    """
    Exact symbol of a family member.

    Examples:

        holder-regularity family primal:3,2

        holder-regularity family dual:2,1 -o dual21.json
    """
    try:
        family = parse_family_spec(spec)
    except RegularityError as e:
        _exit_with(e)
    mask = MaskFile.from_laurent(family.symbol())
    click.echo(f"{family.label}: r = {family.r}")
    click.echo(f"offset: {mask.offset}")
    click.echo("coeffs: " + ",".join(format_rational(c) for c in mask.coeffs))
    if output:
        Path(output).write_text(mask.model_dump_json(indent=2), encoding="utf-8")
        click.echo(f"wrote {output}")


def main():
    """Entry point for the console script."""
    cli()


if __name__ == "__main__":
    main()
