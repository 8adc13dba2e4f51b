"""Command-line surface: analyze, morita, suite."""

from __future__ import annotations

import sys

import click

from .conditions import build_defect_report
from .guards import GuardExceeded
from .io import InputError, load_guards, parse_module, parse_ring
from .modules import regular_module
from .morita import morita_pair_check
from .reports import (
    defect_report_dict,
    morita_report_dict,
    render_defect_report,
    render_morita_report,
    render_suite_report,
    suite_report_dict,
    write_structured,
)
from .suite import run_suite

import json
import os


@click.group()
def main():
    """Finite-algebra verification workbench for C4-type conditions."""


def _load(path, ring_mode):
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    base_dir = os.path.dirname(path) or "."
    if ring_mode and "action" not in data and data.get("construct") not in (
            "regular", "direct_sum"):
        ring = parse_ring(data, where=path, base_dir=base_dir)
        return regular_module(ring)
    return parse_module(data, where=path, base_dir=base_dir)


def _parse_extensions(text):
    grid = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(",")
        if len(parts) != 2:
            raise click.BadParameter("extensions must look like 'm,d' or 'm,d;m,d'")
        grid.append((int(parts[0]), int(parts[1])))
    return tuple(grid) or ((2, 1),)


@main.command()
@click.argument("module_file", type=click.Path(exists=True))
@click.option("--ring", "ring_mode", is_flag=True,
              help="treat the input as a ring and analyze its regular module, "
                   "adding the right-ideal scan")
@click.option("--extensions", default="2,1", show_default=True,
              help="extension grid cells, 'm,d' pairs separated by ';'")
@click.option("--strict-chains/--non-strict-chains", default=True,
              show_default=True, help="depth chains use proper inclusions")
@click.option("--guards", "guards_path", type=click.Path(exists=True),
              default=None, help="guards file (fallback: $C4LAB_GUARDS)")
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="write the structured report here")
def analyze(module_file, ring_mode, extensions, strict_chains, guards_path, out_path):
    """Full defect report for one module (or a ring's regular module)."""
    try:
        guards = load_guards(guards_path)
        module = _load(module_file, ring_mode)
        report = build_defect_report(
            module, module_id=module.name, guards=guards,
            extension_grid=_parse_extensions(extensions),
            strict_chains=strict_chains, ring_mode=ring_mode)
    except (InputError, ValueError, GuardExceeded) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    click.echo(render_defect_report(report))
    if out_path:
        write_structured(out_path, defect_report_dict(report, guards,
                                                      "mono-image-splits"))


@main.command()
@click.argument("module_file", type=click.Path(exists=True))
@click.option("--matrix", "matrix_n", type=int, default=None,
              help="compare against the rank-n free-power realization")
@click.option("--corner", "corner_spec", default=None,
              help="compare against the corner at this idempotent "
                   "(index into idempotents(R), or comma-separated coordinates)")
@click.option("--conditions", default="C4,C4star,swCS,strong,iota",
              show_default=True, help="comma-separated condition list")
@click.option("--guards", "guards_path", type=click.Path(exists=True), default=None)
@click.option("--out", "out_path", type=click.Path(), default=None)
def morita(module_file, matrix_n, corner_spec, conditions, guards_path, out_path):
    """Check condition agreement between a module and its transport."""
    if (matrix_n is None) == (corner_spec is None):
        click.echo("error: exactly one of --matrix or --corner is required", err=True)
        sys.exit(2)
    try:
        guards = load_guards(guards_path)
        module = _load(module_file, ring_mode=False)
        if matrix_n is not None:
            realization = ("matrix", matrix_n)
        else:
            if "," in corner_spec:
                coords = [int(c) for c in corner_spec.split(",")]
            else:
                from .algebra import idempotents
                idems = idempotents(module.ring, guards.max_end_enumeration)
                idx = int(corner_spec)
                if not 0 <= idx < len(idems):
                    raise InputError(
                        f"idempotent index {idx} out of range "
                        f"({len(idems)} idempotents)")
                coords = idems[idx].coords
            realization = ("corner", coords)
        cond_list = []
        for name in conditions.split(","):
            name = name.strip()
            if name.startswith("ext:"):
                _, m_ar, d_dep = name.split(":")[:3]
                cond_list.append(("ext", int(m_ar), int(d_dep), True))
            elif name:
                cond_list.append(name)
        result = morita_pair_check(module.ring, realization, module,
                                   tuple(cond_list), guards=guards)
    except (InputError, ValueError, GuardExceeded) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    click.echo(render_morita_report(result))
    if out_path:
        write_structured(out_path, morita_report_dict(result, guards))
    if result["violations"]:
        sys.exit(1)


@main.command()
@click.option("--filter", "name_filter", default="", help="substring filter")
@click.option("--seed", type=int, default=None,
              help="override the rng seed recorded in the guards")
@click.option("--guards", "guards_path", type=click.Path(exists=True), default=None)
@click.option("--out", "out_path", type=click.Path(), default=None)
def suite(name_filter, seed, guards_path, out_path):
    """Run the built-in verification suite."""
    try:
        guards = load_guards(guards_path)
        if seed is not None:
            from .guards import Guards
            data = guards.to_dict()
            data["rng_seed"] = seed
            guards = Guards.from_dict(data)
        results = run_suite(guards, name_filter)
    except InputError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    summary = suite_report_dict(results, guards)
    click.echo(render_suite_report(summary))
    if out_path:
        write_structured(out_path, summary)
    if summary["failures"]:
        sys.exit(1)


if __name__ == "__main__":
    main()
