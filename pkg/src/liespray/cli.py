"""Command-line client for the toolkit.

Each subcommand builds a request model, drives the corresponding service
handler in process, and formats the response: computation lives behind the
service layer, the CLI only parses inputs and renders outputs.  Anywhere an
algebra is expected, a catalog name or a path to a JSON algebra file is
accepted.

Exit codes: 0 on success (including a decided Infeasible verdict), 2 when
the metrizability decision is Undetermined, 1 on input errors or failed
verification.
"""

from __future__ import annotations

import json
import os
import sys

import click

from . import acceptance
from .errors import LieSprayError, ParseError
from .service import app as handlers
from .service import models


def _resolve_input(value: str) -> models.AlgebraInput:
    """Catalog name, or AlgebraSpec parsed from a JSON file path."""
    if os.path.exists(value):
        try:
            with open(value, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(
                f"{value}: invalid JSON at line {exc.lineno}, column {exc.colno}"
            ) from exc
        try:
            return models.AlgebraSpec.model_validate(doc)
        except ValueError as exc:
            raise ParseError(f"{value}: {exc}") from exc
    return value


def _parse_floats(_ctx, _param, value):
    if value is None:
        return None
    try:
        return [float(part) for part in value.split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated reals, got {value!r}")


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _fail(exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(1)


@click.group()
def main():
    """Metrizability decisions and geodesic integration for canonical
    Lie-group sprays and the planar geodesic-orbit family."""


@main.command()
@click.argument("algebra")
@click.option("--format", "fmt", type=click.Choice(["text", "report"]), default="text")
def check(algebra, fmt):
    """Validate an algebra: Jacobi and representation residuals."""
    try:
        response = handlers.check(models.CheckRequest(algebra=_resolve_input(algebra)))
    except LieSprayError as exc:
        _fail(exc)
    if fmt == "report":
        click.echo(response.model_dump_json(indent=2))
        return
    click.echo(f"name: {response.name}")
    click.echo(f"dim: {response.dim}")
    click.echo(f"labels: {', '.join(response.labels)}")
    click.echo(f"jacobi_residual: {response.jacobi_residual:.17g}")
    if response.has_rep:
        click.echo(f"closure_residual: {response.closure_residual:.17g}")
        click.echo(f"constants_mismatch: {response.constants_mismatch:.17g}")
    else:
        click.echo("rep: none")


@main.command()
@click.argument("algebra")
@click.option("--seed", default=42, show_default=True)
@click.option("--out", default=None, help="Write the report to a file.")
def metrize(algebra, seed, out):
    """Decide invariant metrizability; print a feasibility report."""
    try:
        response = handlers.metrize(
            models.MetrizeRequest(algebra=_resolve_input(algebra), seed=seed)
        )
    except LieSprayError as exc:
        _fail(exc)
    _emit(response.model_dump_json(indent=2) + "\n", out)
    sys.exit(2 if response.status == "Undetermined" else 0)


@main.command()
@click.argument("algebra")
@click.option("--alpha", callback=_parse_floats, required=True,
              help="Initial fiber coordinates, comma-separated.")
@click.option("--t-end", default=1.0, show_default=True)
@click.option("--steps", default=1000, show_default=True)
@click.option("--out", default=None, help="Write CSV to a file instead of stdout.")
@click.option("--format", "fmt", type=click.Choice(["csv", "report"]), default="csv")
def geodesic(algebra, alpha, t_end, steps, out, fmt):
    """Integrate the canonical geodesic flow; export the trajectory."""
    try:
        response = handlers.geodesic(
            models.GeodesicRequest(
                algebra=_resolve_input(algebra), alpha=alpha, t_end=t_end, steps=steps
            )
        )
    except LieSprayError as exc:
        _fail(exc)
    if fmt == "report":
        _emit(response.model_dump_json(indent=2) + "\n", out)
        return
    m = response.size
    header = (
        ["t"]
        + [f"x_{r + 1}{c + 1}" for r in range(m) for c in range(m)]
        + [f"v_{r + 1}{c + 1}" for r in range(m) for c in range(m)]
    )
    lines = [",".join(header)]
    for s in response.samples:
        lines.append(",".join(f"{val:.17g}" for val in [s.t, *s.x, *s.v]))
    _emit("\n".join(lines) + "\n", out)


@main.command(name="go-demo")
@click.option("--kappa", default=0.0, show_default=True)
@click.option("--v", callback=_parse_floats, default="1,0", show_default=True,
              help="Initial velocity, comma-separated.")
@click.option("--t-end", default=1.0, show_default=True)
@click.option("--steps", default=1000, show_default=True)
@click.option("--out", default=None, help="Write CSV to a file.")
def go_demo(kappa, v, t_end, steps, out):
    """Integrate a rotation-lift geodesic on the plane; export CSV and the
    invariant-metrizability verdict of the family member."""
    if len(v) != 2:
        _fail(ParseError(f"--v needs exactly two components, got {len(v)}"))
    try:
        response = handlers.go_demo(
            models.GoDemoRequest(kappa=kappa, v=v, t_end=t_end, steps=steps)
        )
    except LieSprayError as exc:
        _fail(exc)
    lines = ["t,x1,x2,v1,v2,speed"]
    for s in response.samples:
        lines.append(
            ",".join(f"{val:.17g}" for val in (s.t, s.x1, s.x2, s.v1, s.v2, s.speed))
        )
    csv_text = "\n".join(lines) + "\n"
    verdict = json.dumps(
        {
            "kappa": response.kappa,
            "verdict": response.verdict,
            "lift_axioms": response.lift_axioms.model_dump(),
        },
        indent=2,
    )
    if out:
        _emit(csv_text, out)
        click.echo(verdict)
    else:
        click.echo(csv_text, nl=False)
        click.echo(verdict, err=True)


@main.command()
@click.option("--seed", default=42, show_default=True)
@click.option("--out", default=None, help="Write the report to a file.")
def verify(seed, out):
    """Run the acceptance suite; one pass/fail line per criterion."""
    response = handlers.verify(models.VerifyRequest(seed=seed))
    report = acceptance.render_report(response.results, seed)
    _emit(report, out)
    if out:
        click.echo("PASS" if response.all_passed else "FAIL")
    sys.exit(0 if response.all_passed else 1)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(host, port):
    """Serve the HTTP API with uvicorn."""
    import uvicorn

    uvicorn.run("liespray.service.app:app", host=host, port=port)


if __name__ == "__main__":
    main()
