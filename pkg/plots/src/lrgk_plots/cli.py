"""Figure rendering command line."""

import sys

import click

from .render import KINDS, EmptyInput, FigureSpec, SchemaMismatch, render


@click.group()
def cli():
    """Render benchmark figures from report.csv files."""


@cli.command("render")
@click.option("--kind", type=click.Choice(KINDS), required=True)
@click.option("--in", "inputs", type=click.Path(exists=True), multiple=True, required=True,
              help="Input CSV (repeatable).")
@click.option("--out", type=click.Path(), required=True, help="Output PNG path.")
@click.option("--log-x/--linear-x", default=None, help="Override the kind's x-scale.")
@click.option("--log-y/--linear-y", default=None, help="Override the kind's y-scale.")
def render_cmd(kind, inputs, out, log_x, log_y):
    """Render one figure from one or more report CSVs."""
    spec = FigureSpec(inputs=tuple(inputs), kind=kind, out=out, log_x=log_x, log_y=log_y)
    render(spec)
    click.echo(f"wrote {out}")


def main():
    try:
        cli(standalone_mode=True)
    except SchemaMismatch as exc:
        click.echo(f"schema mismatch: {exc}", err=True)
        sys.exit(2)
    except EmptyInput as exc:
        click.echo(f"empty input: {exc}", err=True)
        sys.exit(2)


if __name__ == "__main__":
    main()
