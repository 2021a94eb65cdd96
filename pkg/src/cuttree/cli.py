"""Command-line front end.

Subcommands: ``maxflow``, ``mincut``, ``tree``, ``ghtree``, ``strip sep``,
``strip tree``, ``verify`` and ``report``.  Exit codes: 0 on success, 1 on
input errors, 2 on verification failure.  The global ``--format`` flag
selects json or dot for tree-shaped outputs, and the CUTTREE_ORACLE_LIMIT
environment variable overrides the oracle vertex cap.
"""

from __future__ import annotations

import json
import sys

import click

from .netcore import Network, NetworkError, load_network
from .flow import flow_to_json, max_flow, min_cut_largest, min_cut_smallest
from .cutring import OracleLimitError
from .structure import StructureTree, build_canonical_tree, canonical_json, gomory_hu_extract
from . import strips as strips_mod
from .strips import load_strip_json, parse_strip_endpoint


def _fail(message: str, code: int = 1):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _read_network(path: str) -> Network:
    try:
        with open(path) as fh:
            return load_network(fh.read())
    except OSError as exc:
        _fail(str(exc))
    except (NetworkError, json.JSONDecodeError) as exc:
        _fail(f"{path}: {exc}")


def _read_strip(path: str):
    try:
        with open(path) as fh:
            return load_strip_json(fh.read())
    except OSError as exc:
        _fail(str(exc))
    except (NetworkError, json.JSONDecodeError) as exc:
        _fail(f"{path}: {exc}")


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=not text.endswith("\n"))


def _emit_tree(T: StructureTree, fmt: str, out: str | None, **kw):
    _emit(T.to_json(**kw) if fmt == "json" else T.to_dot(), out)


@click.group()
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["json", "dot"]),
    default="json",
    show_default=True,
    help="Output format for tree-shaped results.",
)
@click.pass_context
def main(ctx, fmt):
    """Max-flows, canonical min-cuts and structure trees for networks."""
    ctx.ensure_object(dict)
    ctx.obj["format"] = fmt


@main.command()
@click.option("-i", "--input", "path", required=True, type=click.Path())
@click.option("-s", "source", required=True)
@click.option("-t", "sink", required=True)
@click.option("--flow-out", type=click.Path(), help="Write the flow JSON here.")
def maxflow(path, source, sink, flow_out):
    """Print the maximum (s, t)-flow value."""
    net = _read_network(path)
    try:
        f, value = max_flow(net, source, sink)
    except NetworkError as exc:
        _fail(str(exc))
    if flow_out:
        with open(flow_out, "w") as fh:
            fh.write(canonical_json(flow_to_json(f)))
    click.echo(str(value))


@main.command()
@click.option("-i", "--input", "path", required=True, type=click.Path())
@click.option("-s", "source", required=True)
@click.option("-t", "sink", required=True)
@click.option("--largest", is_flag=True, help="Inclusion-largest instead of smallest.")
@click.option("-o", "--output", type=click.Path())
def mincut(path, source, sink, largest, output):
    """The canonical extremal minimum cut containing s (smallest by default)."""
    net = _read_network(path)
    try:
        cut = (min_cut_largest if largest else min_cut_smallest)(net, source, sink)
    except NetworkError as exc:
        _fail(str(exc))
    from .netcore import capacity

    _emit(canonical_json({"capacity": capacity(net, cut), "side": sorted(cut.side)}), output)


@main.command()
@click.option("-i", "--input", "path", required=True, type=click.Path())
@click.option("-o", "--output", type=click.Path())
@click.pass_context
def tree(ctx, path, output):
    """The canonical structure tree (JSON or DOT)."""
    net = _read_network(path)
    try:
        T = build_canonical_tree(net)
    except NetworkError as exc:
        _fail(str(exc))
    _emit_tree(T, ctx.obj["format"], output)


@main.command()
@click.option("-i", "--input", "path", required=True, type=click.Path())
@click.option("-o", "--output", type=click.Path())
@click.pass_context
def ghtree(ctx, path, output):
    """Gomory-Hu tree obtained by contracting edges at non-image nodes."""
    net = _read_network(path)
    try:
        T = gomory_hu_extract(build_canonical_tree(net))
    except NetworkError as exc:
        _fail(str(exc))
    _emit_tree(T, ctx.obj["format"], output)


@main.group()
def strip():
    """Operations on periodic two-ended strips."""


@strip.command("sep")
@click.option("-i", "--input", "path", required=True, type=click.Path())
@click.option("-x", "xspec", required=True, help="end:left, end:right or col:IDX/PATTERN")
@click.option("-y", "yspec", required=True)
def strip_sep(path, xspec, yspec):
    """Print the separation level of two vertices/ends of a strip."""
    S = _read_strip(path)
    try:
        x, y = parse_strip_endpoint(xspec), parse_strip_endpoint(yspec)
        _validate_strip_endpoint(S, x, xspec)
        _validate_strip_endpoint(S, y, yspec)
        level = strips_mod.separation_level(S, x, y)
    except NetworkError as exc:
        _fail(str(exc))
    click.echo(str(level))


def _validate_strip_endpoint(S, pt, spec):
    if not isinstance(pt, strips_mod.EndPoint) and pt[1] not in S.pattern:
        raise NetworkError(f"unknown vertex {spec!r}: pattern id {pt[1]!r} not in strip")


@strip.command("tree")
@click.option("-i", "--input", "path", required=True, type=click.Path())
@click.option("-n", "level", required=True, type=int, help="Separation level of the tree.")
@click.option("-w", "width", type=int, default=None, help="Window width (default: max(n, 3)).")
@click.option("-o", "--output", type=click.Path())
@click.pass_context
def strip_tree(ctx, path, level, width, output):
    """The windowed level-n structure tree of a strip truncation."""
    S = _read_strip(path)
    w = width if width is not None else max(level, 3)
    try:
        T = strips_mod.windowed_tree(S, level, w)
    except NetworkError as exc:
        _fail(str(exc))
    surr = strips_mod.end_surrogate_nodes(T)
    _emit_tree(T, ctx.obj["format"], output, end_surrogates=surr)


@main.command()
@click.option("-i", "--input", "path", required=True, type=click.Path())
@click.option("--seed", type=int, default=0, show_default=True)
def verify(path, seed):
    """Run the exhaustive-oracle suite on a network fixture."""
    from .verify import (
        report_residual_cut_in_tree_ring,
        report_smallest_vs_optimal,
        run_verification,
    )

    net = _read_network(path)
    try:
        results = run_verification(net, seed)
    except OracleLimitError as exc:
        _fail(str(exc))
    ok = True
    for r in results:
        click.echo(r.line())
        ok = ok and r.passed
    if ok:
        svo = report_smallest_vs_optimal(net)
        rr = report_residual_cut_in_tree_ring(net)
        click.echo(f"INFO smallest-separator family agrees with optimally nested: {svo['all_agree']}")
        click.echo(f"INFO residual min-cut equals geodesic-smallest: {rr['matching']}/{rr['pairs']}")
    if not ok:
        sys.exit(2)


@main.command()
@click.option("-i", "--input", "path", required=True, type=click.Path())
@click.option("-s", "source", default=None)
@click.option("-t", "sink", default=None)
@click.option("-o", "--outdir", required=True, type=click.Path())
def report(path, source, sink, outdir):
    """Write CSV summaries and matplotlib figures to a directory."""
    from .report import write_report

    net = _read_network(path)
    if (source is None) != (sink is None):
        _fail("report needs both -s and -t or neither")
    try:
        artifacts = write_report(net, outdir, source, sink)
    except NetworkError as exc:
        _fail(str(exc))
    for a in artifacts:
        click.echo(a)


if __name__ == "__main__":
    main()
