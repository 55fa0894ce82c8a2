"""
Command-line surface.

    python -m app.cli fixtures/hit.disc --trace
    python -m app.cli generate --seed 7 --count 20 out/
    python -m app.cli rules rules/hit.rules
"""

import random
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional, Tuple

import click
from pydantic import TypeAdapter

from app.config import settings
from app.core.exceptions import DiscourseError
from app.engine.rule_parser import rule_parser
from app.harness.document import document_parser
from app.harness.generators import generate_discourse
from app.harness.report import report_builder
from app.harness.runner import discourse_runner
from app.models.rule import RuleBook
from app.schemas.report import Report
from app.utilities.logger import AppLogger

logger = AppLogger.get_logger("cli")

EXIT_EXPECTATIONS = 1
EXIT_ERROR = 2


class DefaultGroup(click.Group):
    """A group that falls back to ``default_command`` for unknown first arguments."""

    def __init__(self, *args, default_command: str = "run", **kwargs):
        super().__init__(*args, **kwargs)
        self.default_command = default_command

    def parse_args(self, ctx: click.Context, args: List[str]) -> List[str]:
        if args and args[0] not in self.commands and args[0] not in ("--help", "-h"):
            args = [self.default_command] + list(args)
        return super().parse_args(ctx, args)


@click.group(cls=DefaultGroup, context_settings={"help_option_names": ["-h", "--help"]})
def cli():
    """Resolve pronouns in annotated discourses."""


def _load_rules(rules_file: Optional[Path]) -> Optional[RuleBook]:
    path = rules_file or (Path(settings.DEFAULT_RULES_FILE) if settings.DEFAULT_RULES_FILE else None)
    return rule_parser.load(path) if path else None


def _run_file(path: Path, rules: Optional[RuleBook]) -> Tuple[Path, Optional[Report], Optional[str]]:
    try:
        document = document_parser.load(path)
        report = discourse_runner.run(document, rules, base_dir=path.parent, source=str(path))
    except (DiscourseError, OSError) as exc:
        logger.error(f"{path}: {type(exc).__name__}: {exc}")
        return path, None, f"{type(exc).__name__}: {exc}"
    return path, report, None


@cli.command("run")
@click.argument("files", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--rules", "rules_file", type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Extra rule file.")
@click.option("--trace", is_flag=True, help="Include derivation traces and context snapshots.")
@click.option(
    "--report",
    "report_format",
    type=click.Choice(["text", "structured"]),
    default="text",
    show_default=True,
)
@click.option("--check", is_flag=True, help="Exit nonzero when an expectation fails.")
@click.option("--jobs", default=1, show_default=True, type=click.IntRange(min=1), help="Files processed in parallel.")
@click.pass_context
def run_command(
    ctx: click.Context,
    files: Tuple[Path, ...],
    rules_file: Optional[Path],
    trace: bool,
    report_format: str,
    check: bool,
    jobs: int,
):
    """Run discourse documents and print their reports."""
    try:
        rules = _load_rules(rules_file)
    except (DiscourseError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        ctx.exit(EXIT_ERROR)

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        outcomes = list(pool.map(lambda path: _run_file(path, rules), files))

    reports = [report for _, report, _ in outcomes if report is not None]
    for path, _, error in outcomes:
        if error is not None:
            click.echo(f"error: {error}", err=True)

    if report_format == "structured":
        if len(files) == 1 and reports:
            click.echo(report_builder.render_structured(reports[0]), nl=False)
        elif reports:
            click.echo(TypeAdapter(List[Report]).dump_json(reports, indent=2).decode() + "\n", nl=False)
    else:
        click.echo("\n".join(report_builder.render_text(r, trace=trace) for r in reports), nl=False)

    if any(error is not None for _, _, error in outcomes):
        ctx.exit(EXIT_ERROR)
    if check and not all(report.passed for report in reports):
        failed = sum(1 for r in reports for x in r.expectations if not x.passed)
        click.echo(f"{failed} expectation(s) failed", err=True)
        ctx.exit(EXIT_EXPECTATIONS)


@cli.command("generate")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--count", default=10, show_default=True, type=click.IntRange(min=1))
@click.argument("out_dir", type=click.Path(file_okay=False, path_type=Path))
def generate_command(seed: int, count: int, out_dir: Path):
    """Write randomly generated discourse documents."""
    rng = random.Random(seed)
    out_dir.mkdir(parents=True, exist_ok=True)
    for i in range(1, count + 1):
        document = generate_discourse(rng, title=f"generated {seed}-{i}")
        target = out_dir / f"generated-{seed}-{i:03d}.disc"
        target.write_text(document_parser.render(document), encoding="utf-8")
    logger.info(f"Wrote {count} documents to {out_dir}")
    click.echo(f"wrote {count} documents to {out_dir}")


@cli.command("rules")
@click.argument("file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.pass_context
def rules_command(ctx: click.Context, file: Path):
    """Parse a rule file and print it in canonical form."""
    try:
        book = rule_parser.load(file)
    except DiscourseError as exc:
        click.echo(f"error: {exc}", err=True)
        ctx.exit(EXIT_ERROR)
    click.echo(rule_parser.render(book), nl=False)


if __name__ == "__main__":
    cli()
