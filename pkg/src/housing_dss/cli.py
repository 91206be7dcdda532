"""Batch command-line interface.

Exit codes: 0 success, 1 domain/data error, 2 usage error, and 3 for
``weights`` when the judgments are inconsistent (CR > 0.1).
"""

from __future__ import annotations

import functools
import json
import re
import sys
from pathlib import Path

import click

from .domain import Cohort, build_decision_matrix
from .eligibility import screen_cohort
from .errors import ConfigError, HousingDssError
from .methods import Method
from .pairwise import CR_THRESHOLD, PairwiseMatrix, PriorityAlgorithm
from .persistence import (
    AppConfig,
    FileFormat,
    default_config,
    export_report,
    load_applications,
    load_config,
    save_results,
)
from .pipeline import RANKING_METHODS, derive_weights, rank_one, run_pipeline
from .ranking import allocate as allocate_units

_METHOD_CHOICES = [m.value for m in RANKING_METHODS] + ["all"]


def engine_errors(fn):
    """Turn engine exceptions into exit code 1 with a one-line message."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except HousingDssError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)

    return wrapper


def _sniff_format(path: str, fmt: str | None) -> FileFormat:
    if fmt:
        return FileFormat(fmt)
    return FileFormat.JSON if path.lower().endswith(".json") else FileFormat.CSV


def _read_cohorts(apps: str, fmt: str | None) -> list[Cohort]:
    return load_applications(Path(apps).read_bytes(), _sniff_format(apps, fmt))


def _read_config(config: str | None) -> AppConfig:
    if config is None:
        return default_config()
    return load_config(Path(config).read_bytes())


def _select_cohorts(cohorts: list[Cohort], selector: str | None) -> list[Cohort]:
    if selector is None:
        if not cohorts:
            raise ConfigError("no cohorts in the applications file")
        return cohorts
    keys = {f"{c.mention}/{c.level.value}": c for c in cohorts}
    if selector not in keys:
        raise ConfigError(
            f"no cohort {selector!r} in the applications file; "
            f"available: {', '.join(sorted(keys))}"
        )
    return [keys[selector]]


def _slug(cohort: Cohort) -> str:
    raw = f"{cohort.mention}_{cohort.level.value}".lower()
    return re.sub(r"[^a-z0-9]+", "_", raw).strip("_")


def _print_ranking(title: str, ranking) -> None:
    click.echo(f"  {title}:")
    for entry in ranking.entries:
        click.echo(f"    {entry.rank:>3}  {entry.student_id:<12} {entry.score:.4f}")


_apps_option = click.option(
    "--apps", required=True, type=click.Path(exists=True, dir_okay=False),
    help="Applications file (CSV or JSON).",
)
_format_option = click.option(
    "--format", "fmt", type=click.Choice(["csv", "json"]), default=None,
    help="Applications file format (default: by file extension).",
)
_config_option = click.option(
    "--config", type=click.Path(exists=True, dir_okay=False), default=None,
    help="Configuration JSON (default: the built-in configuration).",
)
_cohort_option = click.option(
    "--cohort", "selector", default=None, metavar="MENTION/LEVEL",
    help='Restrict to one cohort, e.g. "Computer science/L1".',
)
_force_option = click.option(
    "--force", is_flag=True, help="Proceed even when judgments exceed CR 0.1 (recorded)."
)


@click.group()
@click.version_option(version="0.1.0", prog_name="housing-dss")
def main():
    """Decision support for student housing allocation.

    Stage 1 screens applications against the basic eligibility rules;
    stage 2 ranks eligible students per cohort (AHP, weighted sum,
    PROMETHEE II), compares the rankings, and allocates housing units.
    """


@main.command()
@_apps_option
@_format_option
@_config_option
@_cohort_option
@engine_errors
def screen(apps, fmt, config, selector):
    """Screen applications against the basic eligibility rules."""
    cfg = _read_config(config)
    for cohort in _select_cohorts(_read_cohorts(apps, fmt), selector):
        result = screen_cohort(cohort, cfg.rules)
        click.echo(
            f"{cohort.mention}/{cohort.level.value}: received {result.counts.received}, "
            f"eligible {result.counts.eligible}, rejected {result.counts.rejected}"
        )
        for outcome in result.rejected:
            rules = ", ".join(r.value for r in outcome.failed_rules)
            click.echo(f"  {outcome.student_id} REJECTED: {rules}")


@main.command()
@click.option(
    "--judgments", required=True, type=click.Path(exists=True, dir_okay=False),
    help="Judgments JSON ({labels, upper_triangle}) or a config file with a judgments section.",
)
@click.option(
    "--algorithm", type=click.Choice([a.value for a in PriorityAlgorithm]),
    default=PriorityAlgorithm.EIGENVECTOR.value, show_default=True,
)
@engine_errors
def weights(judgments, algorithm):
    """Derive criterion weights from pairwise judgments; exit 3 when CR > 0.1."""
    doc = json.loads(Path(judgments).read_text("utf-8"))
    if "judgments" in doc or "upper_triangle" not in doc:
        matrix = load_config(Path(judgments).read_bytes()).judgments
        if matrix is None:
            raise ConfigError(f"{judgments} has no judgments section")
    else:
        triangle = {}
        for pair, value in doc.get("upper_triangle", {}).items():
            first, _, second = str(pair).partition(":")
            triangle[(first, second)] = float(value)
        matrix = PairwiseMatrix.from_upper_triangle(tuple(doc["labels"]), triangle)
    vector, report = derive_weights(matrix, PriorityAlgorithm(algorithm))
    for label, value in vector.as_dict().items():
        click.echo(f"{label:<5} {value:.4f}")
    click.echo(
        f"lambda_max {report.lambda_max:.4f}  CI {report.ci:.4f}  CR {report.cr:.4f}  "
        f"({'consistent' if report.consistent else 'INCONSISTENT'}, threshold {CR_THRESHOLD})"
    )
    if not report.consistent:
        sys.exit(3)


def _weights_or_fail(cfg: AppConfig, force: bool):
    if cfg.judgments is None:
        raise ConfigError("config has no judgments section; cannot derive weights")
    vector, report = derive_weights(cfg.judgments, cfg.priority_algorithm)
    if not report.consistent and not force:
        raise ConfigError(
            f"judgments are inconsistent (CR {report.cr:.4f} > {CR_THRESHOLD}); "
            "revise them or pass --force"
        )
    return vector, report


@main.command()
@_apps_option
@_format_option
@_config_option
@_cohort_option
@click.option("--method", type=click.Choice(_METHOD_CHOICES), default="all", show_default=True)
@_force_option
@engine_errors
def rank(apps, fmt, config, selector, method, force):
    """Rank the eligible students of each cohort."""
    cfg = _read_config(config)
    vector, _ = _weights_or_fail(cfg, force)
    methods = list(RANKING_METHODS) if method == "all" else [Method(method)]
    for cohort in _select_cohorts(_read_cohorts(apps, fmt), selector):
        screening = screen_cohort(cohort, cfg.rules)
        matrix = build_decision_matrix(cohort, screening.eligible_ids)
        click.echo(f"{cohort.mention}/{cohort.level.value} ({len(matrix.rows)} eligible)")
        for m in methods:
            _print_ranking(m.value, rank_one(matrix, vector, m, cfg, cohort_key=cohort.key))


@main.command()
@_apps_option
@_format_option
@_config_option
@_cohort_option
@_force_option
@engine_errors
def compare(apps, fmt, config, selector, force):
    """Rank with all three methods and report pairwise rank similarity."""
    cfg = _read_config(config)
    for cohort in _select_cohorts(_read_cohorts(apps, fmt), selector):
        bundle = run_pipeline(cohort, cfg, force=force)
        click.echo(f"{cohort.mention}/{cohort.level.value}:")
        for report in bundle.similarity:
            pair = f"{report.methods[0].value} vs {report.methods[1].value}"
            click.echo(
                f"  {pair:<22} {report.matches:>2}/{report.n} identical ranks "
                f"({report.percent:.2f}%)"
            )


@main.command(name="allocate")
@_apps_option
@_format_option
@_config_option
@_cohort_option
@click.option("--capacity", type=int, default=None, help="Units available (default: config).")
@click.option(
    "--basis", type=click.Choice([m.value for m in Method]), default=None,
    help="Ranking the allocation follows (default: config).",
)
@_force_option
@engine_errors
def allocate_cmd(apps, fmt, config, selector, capacity, basis, force):
    """Fill housing units from the top of the aggregate ranking."""
    cfg = _read_config(config)
    for cohort in _select_cohorts(_read_cohorts(apps, fmt), selector):
        bundle = run_pipeline(cohort, cfg, force=force)
        basis_method = Method(basis) if basis else cfg.allocation_basis
        chosen_capacity = capacity if capacity is not None else cfg.capacity_for(cohort.key)
        if chosen_capacity is None:
            raise ConfigError(
                f"no capacity configured for {cohort.mention}/{cohort.level.value}; "
                "pass --capacity"
            )
        if basis_method not in bundle.rankings:
            raise ConfigError(f"no {basis_method.value} ranking available for allocation")
        result = allocate_units(bundle.rankings[basis_method], chosen_capacity)
        click.echo(
            f"{cohort.mention}/{cohort.level.value}: capacity {chosen_capacity}, "
            f"basis {basis_method.value}"
        )
        click.echo(f"  allocated ({len(result.allocated)}): {', '.join(result.allocated)}")
        click.echo(f"  waitlist  ({len(result.waitlist)}): {', '.join(result.waitlist)}")


@main.command()
@_apps_option
@_format_option
@_config_option
@_cohort_option
@click.option(
    "--out", required=True, envvar="HOUSING_DSS_STORE_DIR",
    type=click.Path(file_okay=False),
    help="Output directory (or env HOUSING_DSS_STORE_DIR).",
)
@click.option(
    "--timestamp", default=None, metavar="ISO8601",
    help="Fix the bundle timestamp so reruns are byte-identical.",
)
@_force_option
@engine_errors
def pipeline(apps, fmt, config, selector, out, timestamp, force):
    """Run both stages end to end and write bundles plus reports."""
    cfg = _read_config(config)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for cohort in _select_cohorts(_read_cohorts(apps, fmt), selector):
        bundle = run_pipeline(cohort, cfg, generated_at=timestamp, force=force)
        slug = _slug(cohort)
        paths = {
            "bundle": out_dir / f"bundle_{slug}.json",
            "report_json": out_dir / f"report_{slug}.json",
            "report_csv": out_dir / f"report_{slug}.csv",
        }
        paths["bundle"].write_bytes(save_results(bundle))
        paths["report_json"].write_bytes(export_report(bundle, FileFormat.JSON))
        paths["report_csv"].write_bytes(export_report(bundle, FileFormat.CSV))
        counts = bundle.screening.counts
        ranked = ", ".join(m.value for m in bundle.rankings) or "none"
        click.echo(
            f"{cohort.mention}/{cohort.level.value}: received {counts.received}, "
            f"eligible {counts.eligible}, rejected {counts.rejected}; rankings: {ranked}"
        )
        for path in paths.values():
            click.echo(f"  wrote {path}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@_config_option
@engine_errors
def serve(host, port, config):
    """Serve the HTTP API."""
    import uvicorn

    from .api import create_app

    uvicorn.run(create_app(_read_config(config)), host=host, port=port)


if __name__ == "__main__":
    main()
