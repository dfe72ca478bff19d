"""Command line front end: parse the text formats, run the analyses, and
emit versioned line-oriented reports with stable bytes.

Exit codes: 0 for YES/valid/success, 1 for NO/invalid/failed criteria, 2 for
input errors (malformed files, mismatched hashes, instances over a cap).
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Optional

import click

from . import decomp
from .cycles import DEFAULT_CYCLE_CAP, cycle_hypergraph
from .dtw1 import recognize_dtw1, verify_certificate
from .errors import CapExceeded, InstanceTooLarge
from .formats import (
    ParseError,
    digraph_hash,
    format_certificate,
    format_cycles,
    format_dbd,
    format_ghd,
    format_hbd,
    format_transcript,
    header_lines,
    parse_certificate,
    parse_dbd,
    parse_digraph,
    parse_dtd,
    parse_hypergraph,
    read_document,
)
from .games import GAME_SIZE_LIMIT, play_transcript, solve_game
from .hypergraph import hypertree_witness, is_alpha_acyclic


@dataclass(frozen=True)
class RunConfig:
    """One invocation's knobs, echoed into every output header."""

    input: Optional[str]
    command: str
    cycle_cap: int = DEFAULT_CYCLE_CAP
    game_size_cap: int = GAME_SIZE_LIMIT
    seed: int = 0
    output_format: str = "text"

    def __post_init__(self):
        assert self.cycle_cap > 0, "cycle cap must be positive"
        assert self.game_size_cap > 0, "game size cap must be positive"
        assert self.output_format in ("text", "structured"), "unknown format"


def _run_options(f):
    for opt in (
        click.option(
            "--format",
            "output_format",
            type=click.Choice(("text", "structured")),
            default="text",
            show_default=True,
            help="`text` adds `#` comment lines; `structured` is records only.",
        ),
        click.option(
            "--seed",
            default=0,
            show_default=True,
            help="Random seed, echoed in the output header.",
        ),
        click.option(
            "--cap",
            type=click.IntRange(min=1),
            default=DEFAULT_CYCLE_CAP,
            show_default=True,
            help="Cycle enumeration cap.",
        ),
    ):
        f = opt(f)
    return f


def _die(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


def _read_file(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        _die(str(exc))


def _load_digraph(path: str):
    try:
        return parse_digraph(_read_file(path))
    except ParseError as exc:
        _die(str(exc))


def _guarded(fn, *args, **kwargs):
    """Run a library call, mapping its input rejections to exit code 2."""
    try:
        return fn(*args, **kwargs)
    except (ValueError, CapExceeded, InstanceTooLarge) as exc:
        _die(str(exc))


def _note(cfg: RunConfig, lines: list, text: str):
    if cfg.output_format == "text":
        lines.append(f"# {text}")


def _emit(lines):
    click.echo("\n".join(lines))


def _report_lines(lines, verdict_key, verdict, report):
    lines.append(f"{verdict_key}={verdict}")
    lines.append(f"result={'valid' if report.valid else 'invalid'}")
    if report.valid and report.width is not None:
        lines.append(f"width={report.width}")
    for violation in report.violations:
        lines.append(f"violation={violation}")


def _load_decomposition_document(path: str, d):
    try:
        kv, records = read_document(_read_file(path))
    except ParseError as exc:
        _die(str(exc))
    if "digraph" in kv and kv["digraph"] != digraph_hash(d):
        _die("decomposition was produced for a different digraph")
    return kv, records


@click.group()
def main():
    """Directed treewidth one: recognition with certificates, cycle
    hypergraphs, decomposition conversions and the robber game."""


@main.command("recognize")
@click.argument("digraph_file", type=click.Path(exists=True, dir_okay=False))
@_run_options
def cmd_recognize(digraph_file, cap, seed, output_format):
    """Decide directed treewidth one; print a certificate either way."""
    cfg = RunConfig(digraph_file, "recognize", cycle_cap=cap, seed=seed,
                    output_format=output_format)
    d, names = _load_digraph(digraph_file)
    cert = _guarded(recognize_dtw1, d, cap=cfg.cycle_cap)
    lines = header_lines("recognize", cfg.seed, cap=cfg.cycle_cap, digraph=d)
    if cert.verdict == "YES":
        _note(cfg, lines, "directed treewidth one: the decomposition below "
                          "has width 1")
    else:
        w = cert.witness
        pattern = f"Bicycle({w.length})" if w.kind == "bicycle" else "A4"
        _note(cfg, lines, f"directed treewidth exceeds one: butterfly minor "
                          f"{pattern} plus an order-3 haven")
    _emit(format_certificate(cert, names, lines))
    sys.exit(0 if cert.verdict == "YES" else 1)


@main.command("verify-cert")
@click.argument("digraph_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("certificate_file", type=click.Path(exists=True, dir_okay=False))
@_run_options
def cmd_verify_cert(digraph_file, certificate_file, cap, seed, output_format):
    """Re-check a previously emitted certificate against its digraph."""
    cfg = RunConfig(digraph_file, "verify-cert", cycle_cap=cap, seed=seed,
                    output_format=output_format)
    d, names = _load_digraph(digraph_file)
    name_to_id = {name: i for i, name in enumerate(names)}
    text = _read_file(certificate_file)
    try:
        kv, _ = read_document(text)
    except ParseError as exc:
        _die(str(exc))
    if kv.get("digraph") != digraph_hash(d):
        _die("certificate was issued for a different digraph")
    try:
        _, cert = parse_certificate(text, name_to_id)
    except ParseError as exc:
        _die(str(exc))
    report = verify_certificate(d, cert)
    lines = header_lines("verify-cert", cfg.seed, cap=cfg.cycle_cap, digraph=d)
    lines.append(f"verdict={cert.verdict}")
    lines.append(f"result={'valid' if report.valid else 'invalid'}")
    if cert.verdict == "YES" and report.valid and report.width is not None:
        lines.append(f"width={report.width}")
    for violation in report.violations:
        lines.append(f"violation={violation}")
    _note(cfg, lines, "certificate is sound" if report.valid
          else "certificate FAILED verification")
    _emit(lines)
    sys.exit(0 if report.valid else 1)


@main.command("cycles")
@click.argument("digraph_file", type=click.Path(exists=True, dir_okay=False))
@_run_options
def cmd_cycles(digraph_file, cap, seed, output_format):
    """Enumerate the simple directed cycles, one `c ...` line each."""
    cfg = RunConfig(digraph_file, "cycles", cycle_cap=cap, seed=seed,
                    output_format=output_format)
    d, names = _load_digraph(digraph_file)
    ch = _guarded(cycle_hypergraph, d, cfg.cycle_cap)
    lines = header_lines("cycles", cfg.seed, cap=cfg.cycle_cap, digraph=d)
    lines.append(f"count={len(ch.cycles)}")
    _note(cfg, lines, f"{len(ch.cycles)} simple directed cycle(s) in "
                      f"canonical rotation")
    lines.extend(format_cycles(ch, names))
    _emit(lines)
    sys.exit(0)


@main.command("hypergraph")
@click.argument("hypergraph_file", type=click.Path(exists=True, dir_okay=False))
@_run_options
def cmd_hypergraph(hypergraph_file, cap, seed, output_format):
    """Analyse a standalone hypergraph: acyclicity and hypertree structure."""
    cfg = RunConfig(hypergraph_file, "hypergraph", cycle_cap=cap, seed=seed,
                    output_format=output_format)
    try:
        h = parse_hypergraph(_read_file(hypergraph_file))
    except ParseError as exc:
        _die(str(exc))
    acyclic = is_alpha_acyclic(h)
    witness = hypertree_witness(h)
    lines = header_lines("hypergraph", cfg.seed, cap=cfg.cycle_cap)
    lines.append(f"vertices={len(h.vertices)}")
    lines.append(f"edges={len(h.edges)}")
    lines.append(f"alpha_acyclic={'true' if acyclic else 'false'}")
    lines.append(f"hypertree={'true' if witness is not None else 'false'}")
    if witness is not None:
        _note(cfg, lines, "host tree edges follow; every hyperedge induces "
                          "a subtree")
        pos = {v: i for i, v in enumerate(h.vertices)}
        tree_edges = [tuple(sorted(e, key=pos.get)) for e in witness.tree.edges]
        for u, v in sorted(tree_edges, key=lambda e: (pos[e[0]], pos[e[1]])):
            lines.append(f"tree {u} {v}")
    else:
        _note(cfg, lines, "not a hypertree")
    _emit(lines)
    sys.exit(0)


@main.command("validate-dtd")
@click.argument("digraph_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("decomposition_file", type=click.Path(exists=True, dir_okay=False))
@_run_options
def cmd_validate_dtd(digraph_file, decomposition_file, cap, seed, output_format):
    """Validate a directed tree decomposition against its digraph."""
    cfg = RunConfig(digraph_file, "validate-dtd", cycle_cap=cap, seed=seed,
                    output_format=output_format)
    d, names = _load_digraph(digraph_file)
    name_to_id = {name: i for i, name in enumerate(names)}
    _, records = _load_decomposition_document(decomposition_file, d)
    try:
        dec = parse_dtd(records, name_to_id)
    except ParseError as exc:
        _die(str(exc))
    report = decomp.validate_dtd(d, dec)
    lines = header_lines("validate-dtd", cfg.seed, cap=cfg.cycle_cap, digraph=d)
    _report_lines(lines, "kind", "dtd", report)
    _emit(lines)
    sys.exit(0 if report.valid else 1)


@main.command("validate-dbd")
@click.argument("digraph_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("decomposition_file", type=click.Path(exists=True, dir_okay=False))
@_run_options
def cmd_validate_dbd(digraph_file, decomposition_file, cap, seed, output_format):
    """Validate a directed branch decomposition against its digraph."""
    cfg = RunConfig(digraph_file, "validate-dbd", cycle_cap=cap, seed=seed,
                    output_format=output_format)
    d, names = _load_digraph(digraph_file)
    name_to_id = {name: i for i, name in enumerate(names)}
    _, records = _load_decomposition_document(decomposition_file, d)
    try:
        dec = parse_dbd(records, name_to_id)
    except ParseError as exc:
        _die(str(exc))
    report = _guarded(decomp.validate_dbd, d, dec, bound=d.n,
                      cap=cfg.cycle_cap)
    lines = header_lines("validate-dbd", cfg.seed, cap=cfg.cycle_cap, digraph=d)
    _report_lines(lines, "kind", "dbd", report)
    _emit(lines)
    sys.exit(0 if report.valid else 1)


@main.command("convert")
@click.argument("digraph_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("decomposition_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("target", type=click.Choice(("dbd", "hbd", "ghd")))
@_run_options
def cmd_convert(digraph_file, decomposition_file, target, cap, seed,
                output_format):
    """Convert decompositions: dtd to dbd, dbd to hbd, dtd to ghd."""
    cfg = RunConfig(digraph_file, "convert", cycle_cap=cap, seed=seed,
                    output_format=output_format)
    d, names = _load_digraph(digraph_file)
    name_to_id = {name: i for i, name in enumerate(names)}
    _, records = _load_decomposition_document(decomposition_file, d)
    try:
        if target == "hbd":
            dec = parse_dbd(records, name_to_id)
        else:
            dec = parse_dtd(records, name_to_id)
    except ParseError as exc:
        _die(str(exc))
    if target == "hbd":
        report = _guarded(decomp.validate_dbd, d, dec, bound=d.n,
                          cap=cfg.cycle_cap)
    else:
        report = decomp.validate_dtd(d, dec)
    if not report.valid:
        _die("input decomposition invalid: " + "; ".join(report.violations))
    if target == "dbd":
        out = _guarded(decomp.dtd_to_dbd, d, dec, cfg.cycle_cap)
        body, width = format_dbd(out, names), out.width()
    elif target == "hbd":
        out = _guarded(decomp.dbd_to_hbd, d, dec, cfg.cycle_cap)
        body, width = format_hbd(out), out.width()
    else:
        out = _guarded(decomp.dtd_to_ghd, d, dec, cfg.cycle_cap)
        body, width = format_ghd(out), out.width
    lines = header_lines("convert", cfg.seed, cap=cfg.cycle_cap, digraph=d)
    lines.append(f"convert={target}")
    lines.append(f"width={width}")
    _note(cfg, lines, f"converted to a {target} of width {width}")
    lines.extend(body)
    _emit(lines)
    sys.exit(0)


@main.command("game")
@click.argument("digraph_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("cops", type=click.IntRange(min=0))
@_run_options
def cmd_game(digraph_file, cops, cap, seed, output_format):
    """Solve the robber game with the given cop budget; print one play."""
    cfg = RunConfig(digraph_file, "game", cycle_cap=cap, seed=seed,
                    output_format=output_format)
    d, names = _load_digraph(digraph_file)
    result = _guarded(solve_game, d, cops)
    lines = header_lines("game", cfg.seed, cap=cfg.cycle_cap, digraph=d)
    lines.append(f"cops={cops}")
    lines.append(f"cops_win={'true' if result.cops_win else 'false'}")
    if result.cops_win:
        moves = play_transcript(d, result.strategy)
        _note(cfg, lines, f"capture after {len(moves) - 1} cop move(s) "
                          f"against the least-component robber")
        lines.extend(format_transcript(moves, names))
    else:
        _note(cfg, lines, f"{cops} cop(s) never catch the robber")
    _emit(lines)
    sys.exit(0)


@main.command("suite")
@_run_options
def cmd_suite(cap, seed, output_format):
    """Run the acceptance criteria; nonzero exit when any of them fail."""
    from .suite import run_all

    cfg = RunConfig(None, "suite", cycle_cap=cap, seed=seed,
                    output_format=output_format)
    results = run_all(seed=cfg.seed, cycle_cap=cfg.cycle_cap)
    lines = header_lines("suite", cfg.seed, cap=cfg.cycle_cap)
    all_pass = True
    for r in results:
        all_pass &= r.passed
        _note(cfg, lines, f"criterion {r.index}: {r.name}")
        lines.append(
            f"criterion {r.index} status={'pass' if r.passed else 'fail'} "
            f"checked={r.checked} skipped={r.skipped} time={r.seconds:.1f}"
        )
        for failure in r.failures[:5]:
            lines.append(f"failure={failure}")
    lines.append(f"suite={'pass' if all_pass else 'fail'}")
    _emit(lines)
    sys.exit(0 if all_pass else 1)
