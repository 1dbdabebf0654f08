"""``equiflow`` command-line entry point."""
from __future__ import annotations

import sys

import click

from .pipeline import RunConfig, run
from .report import render

FORMATS = click.Choice(["json", "table", "both"])


def _emit(ctx: click.Context, **kwargs) -> None:
    obj = ctx.find_root().obj or {}
    try:
        cfg = RunConfig(format=obj.get("format", "both"), max_group=obj.get("max_group"), **kwargs)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    report, code = run(cfg)
    text = render(report, cfg.format)
    click.echo(text, nl=False, err=False)
    ctx.exit(code)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--format", "fmt", type=FORMATS, default="both", show_default=True, help="Output format.")
@click.option("--max-group", type=click.IntRange(min=1), default=None,
              help="Largest group order to enumerate (default: EQUIFLOW_MAX_GROUP or 48).")
@click.version_option(package_name="artifact", prog_name="equiflow")
@click.pass_context
def main(ctx: click.Context, fmt: str, max_group: int | None) -> None:
    """Equivariant path fields and fixed sets on simplicial G-complexes.

    INPUT is a JSON complex document or catalog:<name>.
    """
    ctx.obj = {"format": fmt, "max_group": max_group}


@main.command()
@click.argument("input")
@click.pass_context
def validate(ctx, input):
    """Parse and check a complex document."""
    _emit(ctx, command="validate", input=input)


@main.command()
@click.argument("input")
@click.option("--times", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Write the subdivided complex here.")
@click.pass_context
def subdivide(ctx, input, times, out):
    """Equivariant barycentric subdivision."""
    _emit(ctx, command="subdivide", input=input, times=times, out=out)


@main.command("catalog")
@click.argument("name", required=False)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None)
@click.pass_context
def catalog_cmd(ctx, name, out):
    """List built-in complexes, or emit one as JSON."""
    _emit(ctx, command="catalog", input=name, out=out)


@main.command()
@click.argument("input")
@click.pass_context
def stratify(ctx, input):
    """Orbit types, strata and their components."""
    _emit(ctx, command="stratify", input=input)


@main.command()
@click.argument("input")
@click.option("--betti/--no-betti", default=True, show_default=True,
              help="Include Betti numbers of component closures.")
@click.pass_context
def euler(ctx, input, betti):
    """Euler characteristics per orbit type."""
    _emit(ctx, command="euler", input=input, betti=betti)


@main.group()
def decide():
    """Decide existence questions."""


@decide.command("path-field")
@click.argument("input")
@click.pass_context
def decide_path_field(ctx, input):
    """Is there a non-singular equivariant path field?"""
    _emit(ctx, command="decide path-field", input=input)


@decide.command("cipd")
@click.argument("input")
@click.option("--fixed-set", required=True,
              help="input | all | vertex:i,j | fixed:a,b | inline JSON simplex list")
@click.pass_context
def decide_cipd(ctx, input, fixed_set):
    """Can the given invariant subcomplex be an exact fixed set?"""
    _emit(ctx, command="decide cipd", input=input, fixed_set=fixed_set)


@main.group()
def construct():
    """Build combinatorial witnesses."""


@construct.command("matching")
@click.argument("input")
@click.option("--cancel", is_flag=True, help="Cancel critical pairs along unique gradient paths.")
@click.pass_context
def construct_matching(ctx, input, cancel):
    """Equivariant acyclic matching."""
    _emit(ctx, command="construct matching", input=input, cancel=cancel)


@construct.command("displacement")
@click.argument("input")
@click.option("--fixed-set", default=None)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Write the map document here.")
@click.pass_context
def construct_displacement(ctx, input, fixed_set, out):
    """Equivariant displacement map with a fixed-point certificate."""
    _emit(ctx, command="construct displacement", input=input, fixed_set=fixed_set, out=out)


@main.group()
def verify():
    """Check supplied witnesses."""


@verify.command("displacement")
@click.argument("input")
@click.argument("map_file", type=click.Path(dir_okay=False))
@click.pass_context
def verify_displacement(ctx, input, map_file):
    """Certify a displacement map document against a complex."""
    _emit(ctx, command="verify displacement", input=input, map_path=map_file)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
