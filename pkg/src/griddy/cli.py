"""Command-line front end for the reduction pipeline.

Exit codes, shared by every subcommand:
  0  yes / ok
  1  no / unsat / rejected
  2  node budget exhausted
  3  input error
  4  internal inconsistency (stages disagree)
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import embedder, engine as eng_mod, formula as fml, reduction, render
from .lattice import (
    LatticeError,
    embedding_from_json,
    embedding_to_json,
    graph_from_json,
    graph_to_json,
    verify_embedding,
)

EXIT_OK = 0
EXIT_NO = 1
EXIT_BUDGET = 2
EXIT_INPUT = 3
EXIT_INCONSISTENT = 4


def _fail(msg: str, code: int) -> "NoReturn":  # noqa: F821
    click.echo(msg, err=True)
    sys.exit(code)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        _fail(f"cannot read {path}: {exc}", EXIT_INPUT)


def _parse_formula_file(path: str) -> fml.Formula:
    try:
        return fml.parse_formula(_read(path))
    except fml.FormulaError as exc:
        _fail(f"formula error: {exc}", EXIT_INPUT)


def _load_graph(path: str):
    try:
        return graph_from_json(_read(path))
    except (LatticeError, ValueError, KeyError) as exc:
        _fail(f"graph error: {exc}", EXIT_INPUT)


def _load_embedding(path: str):
    try:
        return embedding_from_json(_read(path))
    except (ValueError, KeyError) as exc:
        _fail(f"embedding error: {exc}", EXIT_INPUT)


@click.group()
def main():
    """NAE-3SAT to integer-lattice unit-distance graph reduction toolkit."""


@main.command("reduce")
@click.argument("formula_file")
@click.option("--w", type=int, default=None, help="gadget width (default: minimal legal)")
@click.option("--h", type=int, default=None, help="gadget height (default: minimal legal)")
@click.option("-o", "--output", default="graph.json", show_default=True)
@click.option("--index", "index_out", default="index.json", show_default=True)
def cmd_reduce(formula_file, w, h, output, index_out):
    """Compile a formula into the gadget graph plus component index."""
    f = _parse_formula_file(formula_file)
    params = reduction.default_params(f)
    if w is not None or h is not None:
        params = reduction.ReductionParams(w=w or params.w, h=h or params.h)
    try:
        gg = reduction.reduce(f, params)
    except reduction.ReductionError as exc:
        _fail(f"reduction error: {exc}", EXIT_INPUT)
    Path(output).write_text(graph_to_json(gg.graph))
    Path(index_out).write_text(reduction.index_to_json(gg.index))
    click.echo(f"wrote {output} ({gg.graph.n} vertices, {len(gg.graph.edges)} edges), {index_out}")


@main.command("sat")
@click.argument("formula_file")
def cmd_sat(formula_file):
    """Brute-force NAE satisfiability."""
    f = _parse_formula_file(formula_file)
    try:
        a = fml.brute_force_nae_sat(f)
    except fml.FormulaError as exc:
        _fail(f"sat error: {exc}", EXIT_INPUT)
    if a is None:
        click.echo("UNSAT")
        sys.exit(EXIT_NO)
    click.echo("SAT " + "".join("1" if b else "0" for b in a))


@main.command("engine")
@click.argument("formula_file")
def cmd_engine(formula_file):
    """Build the logic engine and decide whether it lies flat."""
    f = _parse_formula_file(formula_file)
    e = eng_mod.build_engine(f)
    click.echo(eng_mod.engine_dump(e), nl=False)
    cfg = eng_mod.exists_flat(e)
    if cfg is None:
        click.echo("NOT FLAT")
        sys.exit(EXIT_NO)
    click.echo("FLAT")
    click.echo(eng_mod.config_dump(cfg), nl=False)


@main.command("witness")
@click.argument("formula_file")
@click.option("-o", "--output", default="embedding.json", show_default=True)
@click.option("--graph", "graph_out", default=None, help="also write the gadget graph JSON")
def cmd_witness(formula_file, output, graph_out):
    """Construct and verify a witness embedding for a satisfiable formula."""
    f = _parse_formula_file(formula_file)
    cfg = eng_mod.exists_flat(eng_mod.build_engine(f))
    if cfg is None:
        click.echo("engine not flat; no witness")
        sys.exit(EXIT_NO)
    gg = reduction.reduce(f)
    emb = reduction.witness_embedding(gg, cfg)
    report = verify_embedding(gg.graph, emb)
    if not report.accepted:
        _fail("witness embedding failed verification", EXIT_INCONSISTENT)
    Path(output).write_text(embedding_to_json(emb))
    if graph_out:
        Path(graph_out).write_text(graph_to_json(gg.graph))
    click.echo(f"wrote verified witness to {output}")


@main.command("embed")
@click.argument("graph_file")
@click.option("--pins", "pins_file", default=None, help="embedding JSON with pinned vertices")
@click.option("--pin", "pin_mode", type=click.Choice(["frame"]), default=None)
@click.option("--index", "index_file", default=None, help="component index (for --pin frame)")
@click.option("--budget", type=int, default=10_000_000, show_default=True)
@click.option("--count", is_flag=True, help="count all embeddings instead of finding one")
@click.option("--no-symmetry", is_flag=True)
@click.option("--no-twins", is_flag=True)
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("-o", "--output", default=None, help="write the witness embedding JSON here")
def cmd_embed(graph_file, pins_file, pin_mode, index_file, budget, count, no_symmetry, no_twins, threads, output):
    """Run the backtracking recognizer on a graph JSON file."""
    g = _load_graph(graph_file)
    pins = {}
    if pins_file:
        pins.update(_load_embedding(pins_file))
    if pin_mode == "frame":
        if not index_file:
            _fail("--pin frame requires --index", EXIT_INPUT)
        idx = reduction.index_from_json(_read(index_file))
        try:
            pins.update(_frame_pins_from_index(idx))
        except KeyError as exc:
            _fail(f"index lacks frame role {exc}", EXIT_INPUT)
    cfg = embedder.SearchConfig(
        budget=budget,
        mode="count_all" if count else "find_one",
        pinned=pins or None,
        symmetry_breaking=not no_symmetry,
        twin_pruning=not no_twins,
    )
    del threads  # single-threaded execution; flag kept for interface stability
    try:
        out = embedder.decide_griddy(g, cfg)
    except embedder.EmbedderError as exc:
        _fail(f"embed error: {exc}", EXIT_INPUT)
    stats = f"outcome={out.kind} nodes={out.nodes_expanded}"
    if out.solution_count is not None:
        stats += f" solutions={out.solution_count}"
    click.echo(stats)
    if out.kind == "embedded":
        if output:
            Path(output).write_text(embedding_to_json(out.witness))
        sys.exit(EXIT_OK)
    sys.exit(EXIT_BUDGET if out.kind == "budget_exhausted" else EXIT_NO)


def _frame_pins_from_index(index: dict[str, int]):
    """Canonical frame pins recovered from an index's frame roles."""
    h = 1 + max(int(r.split("[")[1].split("]")[0]) for r in index if r.startswith("L["))
    w = 1 + max(int(r.split("[")[1].split("]")[0]) for r in index if r.startswith("T["))
    pts = reduction.frame_axis_points(reduction.ReductionParams(w=w, h=h))
    return {index[role]: p for role, p in pts.items()}


@main.command("verify")
@click.argument("graph_file")
@click.argument("embedding_file")
def cmd_verify(graph_file, embedding_file):
    """Check an embedding for unit edges and distinct positions."""
    g = _load_graph(graph_file)
    emb = _load_embedding(embedding_file)
    try:
        report = verify_embedding(g, emb)
    except LatticeError as exc:
        _fail(f"verify error: {exc}", EXIT_INPUT)
    if report.accepted:
        click.echo("ACCEPT")
        sys.exit(EXIT_OK)
    click.echo(f"REJECT non_unit_edges={report.non_unit_edges[:5]} overlaps={report.overlaps[:5]}")
    sys.exit(EXIT_NO)


@main.command("render")
@click.argument("graph_file")
@click.argument("embedding_file")
@click.option("-o", "--output", default="graph.svg", show_default=True)
@click.option("--index", "index_file", default=None, help="highlight flag endpoints")
def cmd_render(graph_file, embedding_file, output, index_file):
    """Render a verified embedding to SVG (or PNG, by extension)."""
    g = _load_graph(graph_file)
    emb = _load_embedding(embedding_file)
    try:
        report = verify_embedding(g, emb)
    except LatticeError as exc:
        _fail(f"render error: {exc}", EXIT_INPUT)
    if not report.accepted:
        _fail("embedding fails verification; not rendering", EXIT_NO)
    highlight = set()
    if index_file:
        highlight = render.flag_endpoint_vertices(reduction.index_from_json(_read(index_file)))
    if output.endswith(".png"):
        render.render_png(g, emb, output, highlight)
    else:
        Path(output).write_text(render.render_svg(g, emb, highlight))
    click.echo(f"wrote {output}")


@main.command("roundtrip")
@click.argument("formula_file")
@click.option("--budget", type=int, default=10_000_000, show_default=True)
@click.option(
    "--tamper-flag",
    default=None,
    help="debug: flip engine flag 'kind,i,j' (kind in {a,ap}) to inject an inconsistency",
)
def cmd_roundtrip(formula_file, budget, tamper_flag):
    """End-to-end consistency check: sat oracle vs engine vs geometry."""
    f = _parse_formula_file(formula_file)
    try:
        sat = fml.brute_force_nae_sat(f)
    except fml.FormulaError as exc:
        _fail(f"roundtrip error: {exc}", EXIT_INPUT)
    e = eng_mod.build_engine(f)
    if tamper_flag:
        try:
            kind, i, j = tamper_flag.split(",")
            e = _flip_flag(e, kind, int(i), int(j))
        except (ValueError, IndexError):
            _fail("bad --tamper-flag, want 'kind,i,j'", EXIT_INPUT)
    cfg = eng_mod.exists_flat(e)
    if (sat is None) != (cfg is None):
        _fail("INCONSISTENT: sat oracle and engine disagree", EXIT_INCONSISTENT)

    gg = reduction.reduce(f)
    if cfg is not None:
        try:
            emb = reduction.witness_embedding(gg, cfg)
        except reduction.ReductionError:
            _fail("INCONSISTENT: flat configuration does not match gadget flags", EXIT_INCONSISTENT)
        if not verify_embedding(gg.graph, emb).accepted:
            _fail("INCONSISTENT: witness embedding rejected", EXIT_INCONSISTENT)
        click.echo("SAT, engine flat, witness verified")
        sys.exit(EXIT_OK)

    pins = reduction.canonical_frame_embedding(gg)
    out = embedder.decide_griddy(
        gg.graph, embedder.SearchConfig(budget=budget, pinned=pins)
    )
    if out.kind == "budget_exhausted":
        click.echo("budget exhausted before UNSAT confirmation")
        sys.exit(EXIT_BUDGET)
    if out.kind == "embedded":
        _fail("INCONSISTENT: formula unsat but gadget embedded", EXIT_INCONSISTENT)
    click.echo(f"UNSAT confirmed (nodes={out.nodes_expanded})")
    sys.exit(EXIT_NO)


def _flip_flag(e: eng_mod.LogicEngine, kind: str, i: int, j: int) -> eng_mod.LogicEngine:
    if kind not in ("a", "ap"):
        raise ValueError(kind)
    mat = [list(r) for r in (e.flag_a if kind == "a" else e.flag_ap)]
    mat[i - 1][j - 1] = not mat[i - 1][j - 1]
    new = tuple(tuple(r) for r in mat)
    if kind == "a":
        return eng_mod.LogicEngine(n=e.n, m=e.m, flag_a=new, flag_ap=e.flag_ap)
    return eng_mod.LogicEngine(n=e.n, m=e.m, flag_a=e.flag_a, flag_ap=new)


if __name__ == "__main__":
    main()
