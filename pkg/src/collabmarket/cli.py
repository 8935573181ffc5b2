"""Command line interface.

Subcommands:

* ``validate``  load and cross-check all inputs, write the resolution report.
* ``analyze``   run the full pipeline and write every table, figure and export.
* ``sector``    tables and figure for one sector only.
* ``region``    cross-sector statistics card for one region only.
* ``diff``      compare two analyze output directories.

Diagnostics go to stderr, data to files; the exit code is 0 exactly when the
run completed without hard errors (2 for usage problems).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .collab import (
    corpus_totals,
    derive_sds_events,
    derive_ue_events,
    events_by_sds,
    export_sds_events,
    export_ue_events,
    sort_sds_events,
    sort_ue_events,
)
from .config import RunConfig, dump_config, load_config, with_overrides
from .errors import CollabMarketError, DiffError, UsageError
from .indicators import (
    IndicatorSnapshot,
    SectorCorrespondenceRow,
    SectorFlowsRow,
    aggregate_regions,
    all_headcounts,
    quadrant_positions,
    region_sector_stats,
    regional_summary,
    sds_weights,
    sector_correspondence,
    sector_flows,
)
from .ingest import (
    LoadReport,
    filter_hard_sciences,
    load_publications,
    load_registries,
    partition_resolvable,
)
from .model import (
    AffiliationResolution,
    AuthorAttribution,
    PublicationRecord,
    Registry,
    SDSCollaboration,
    UECollaboration,
)
from .report import (
    RenderedTable,
    aggregate_table,
    delta_table,
    emit_quadrant_svg,
    region_stats_table,
    regional_summary_table,
    render_table,
    sanitize_code,
    sector_correspondence_table,
    sector_flows_table,
)
from .resolve import Resolver, attribute_authors, resolution_report_rows, resolve_publication
from .indicators import snapshot_diff

MAX_DIAGNOSTICS = 20

RESOLUTION_REPORT_COLUMNS = ("pub_id", "exact", "alias", "unresolved", "unique", "ambiguous")


@dataclass(frozen=True)
class PipelineResult:
    """Everything the subcommands need after events are derived."""

    config: RunConfig
    registry: Registry
    resolver: Resolver
    publications: list[PublicationRecord]
    resolutions: Mapping[str, Sequence[AffiliationResolution]]
    attributions: Mapping[str, Sequence[AuthorAttribution]]
    load_report: LoadReport
    retained: list[PublicationRecord]
    ue_events: list[UECollaboration]
    sds_events: list[SDSCollaboration]


def run_pipeline(config: RunConfig, diagnostics: list[str] | None = None) -> PipelineResult:
    """Load, resolve, attribute, filter, and derive events."""
    config.require_inputs()
    registry = load_registries(
        config.organizations,
        config.roster,
        config.taxonomy,
        config.regions,
        diagnostics,
    )
    publications = load_publications(config.publications, config.window, diagnostics)
    resolver = Resolver.build(registry)
    resolutions = {pub.pub_id: resolve_publication(pub, resolver) for pub in publications}
    attributions = {
        pub.pub_id: attribute_authors(pub, resolutions[pub.pub_id], resolver, config.ambiguity)
        for pub in publications
    }
    kept, load_report = partition_resolvable(publications, resolutions, config.keep_unresolvable)
    retained = filter_hard_sciences(kept, attributions, resolutions, registry)
    ue_events: list[UECollaboration] = []
    sds_events: list[SDSCollaboration] = []
    for pub in retained:
        ue_events.extend(derive_ue_events(pub, resolutions[pub.pub_id], registry))
        sds_events.extend(
            derive_sds_events(
                pub,
                attributions[pub.pub_id],
                resolutions[pub.pub_id],
                registry,
                config.sds_region_split,
            )
        )
    return PipelineResult(
        config,
        registry,
        resolver,
        publications,
        resolutions,
        attributions,
        load_report,
        retained,
        sort_ue_events(ue_events),
        sort_sds_events(sds_events),
    )


def _write_resolution_report(result: PipelineResult, out_dir: Path) -> None:
    rows = resolution_report_rows(result.publications, result.resolutions, result.attributions)
    with (out_dir / "resolution_report.csv").open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(RESOLUTION_REPORT_COLUMNS)
        writer.writerows(rows)


def _write_table(out_dir: Path, table: RenderedTable) -> None:
    (out_dir / f"{table.name}.csv").write_text(render_table(table, "csv"), encoding="utf-8")
    (out_dir / f"{table.name}.jsonl").write_text(render_table(table, "jsonl"), encoding="utf-8")


def _print_diagnostics(diagnostics: Sequence[str]) -> None:
    for message in diagnostics[:MAX_DIAGNOSTICS]:
        print(f"error: {message}", file=sys.stderr)
    overflow = len(diagnostics) - MAX_DIAGNOSTICS
    if overflow > 0:
        print(f"... and {overflow} more", file=sys.stderr)


def _warn_registry_ambiguities(resolver: Resolver) -> None:
    for alias, org_ids in resolver.ambiguous_aliases.items():
        print(
            f"warning: alias {alias!r} is shared by {', '.join(org_ids)}; "
            f"resolving to {min(org_ids)}",
            file=sys.stderr,
        )


def cmd_validate(config: RunConfig) -> int:
    diagnostics: list[str] = []
    result = run_pipeline(config, diagnostics)
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_resolution_report(result, out_dir)
    _warn_registry_ambiguities(result.resolver)
    for warning in result.load_report.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    if not result.publications:
        print("warning: no publications fall inside the configured window", file=sys.stderr)
    totals = corpus_totals(result.ue_events, result.sds_events)
    print(
        f"validate: {result.load_report.publications_read} publications read, "
        f"{len(result.retained)} retained by the collaboration filter, "
        f"{totals.ue_events} university-enterprise events, "
        f"{totals.sds_events} sector events",
        file=sys.stderr,
    )
    if diagnostics:
        _print_diagnostics(diagnostics)
        return 1
    return 0


def _full_correspondence(
    result: PipelineResult,
    grouped: Mapping[str, Sequence[SDSCollaboration]],
) -> dict[str, list[SectorCorrespondenceRow]]:
    """Correspondence rows for every taxonomy sector, active or not."""
    headcounts = all_headcounts(result.registry)
    config = result.config
    return {
        sds: sector_correspondence(
            sds,
            headcounts[sds],
            grouped.get(sds, ()),
            config.regions,
            config.capacity_multipliers.get(sds, 1.0),
        )
        for sds in result.registry.taxonomy.sds_codes
    }


def cmd_analyze(config: RunConfig) -> int:
    result = run_pipeline(config)
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "effective_config.txt").write_text(dump_config(config), encoding="utf-8")
    _write_resolution_report(result, out_dir)
    export_ue_events(result.ue_events, out_dir / "events_ue.csv")
    export_sds_events(result.sds_events, out_dir / "events_sds.csv")

    summary = regional_summary(result.ue_events, config.regions)
    _write_table(out_dir, regional_summary_table(summary))

    grouped = events_by_sds(result.sds_events)
    active = sorted(grouped)
    full_corr = _full_correspondence(result, grouped)
    headcounts = all_headcounts(result.registry)
    flows_by_sds: dict[str, list[SectorFlowsRow]] = {}
    for sds in active:
        flows = sector_flows(sds, headcounts[sds], grouped[sds], config.regions)
        flows_by_sds[sds] = flows
        _write_table(out_dir, sector_correspondence_table(sds, full_corr[sds]))
        _write_table(out_dir, sector_flows_table(sds, flows))
        positions = quadrant_positions(
            sds, full_corr[sds], flows, config.quadrant_share_threshold
        )
        if positions:
            figure = emit_quadrant_svg(positions, sds, config.quadrant_share_threshold)
            (out_dir / f"fig1_{sanitize_code(sds)}.svg").write_text(figure, encoding="utf-8")

    per_region: dict[str, dict[str, SectorCorrespondenceRow]] = {r: {} for r in config.regions}
    for sds, rows in full_corr.items():
        for row in rows:
            per_region[row.region][sds] = row
    for region in sorted(config.regions):
        stats = region_sector_stats(region, per_region[region])
        _write_table(out_dir, region_stats_table(stats))

    weights = sds_weights(result.sds_events)
    aggregate = aggregate_regions(
        {sds: full_corr[sds] for sds in active},
        flows_by_sds,
        weights,
        config.regions,
        config.aggregation_na_policy,
    )
    _write_table(out_dir, aggregate_table(aggregate))

    totals = corpus_totals(result.ue_events, result.sds_events)
    manifest = {
        "regions": sorted(config.regions),
        "window": list(config.window) if config.window is not None else None,
        "taxonomy": dict(sorted(result.registry.taxonomy.parent_uda.items())),
        "active_sds": {sds: sanitize_code(sds) for sds in active},
        "totals": {
            "ue_events": totals.ue_events,
            "sds_events": totals.sds_events,
            "universities": totals.universities,
            "enterprises": totals.enterprises,
            "active_sds": totals.active_sds,
        },
    }
    (out_dir / "snapshot.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(f"analyze: wrote outputs for {len(active)} active sectors to {out_dir}", file=sys.stderr)
    return 0


def cmd_sector(config: RunConfig, sds: str) -> int:
    result = run_pipeline(config)
    if sds not in result.registry.taxonomy:
        raise UsageError(f"sds {sds!r} is not in the taxonomy")
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    events = [ev for ev in result.sds_events if ev.sds == sds]
    headcounts = all_headcounts(result.registry)[sds]
    corr = sector_correspondence(
        sds, headcounts, events, config.regions, config.capacity_multipliers.get(sds, 1.0)
    )
    flows = sector_flows(sds, headcounts, events, config.regions)
    _write_table(out_dir, sector_correspondence_table(sds, corr))
    _write_table(out_dir, sector_flows_table(sds, flows))
    positions = quadrant_positions(sds, corr, flows, config.quadrant_share_threshold)
    if positions:
        figure = emit_quadrant_svg(positions, sds, config.quadrant_share_threshold)
        (out_dir / f"fig1_{sanitize_code(sds)}.svg").write_text(figure, encoding="utf-8")
    return 0


def cmd_region(config: RunConfig, name: str) -> int:
    if name not in config.regions:
        raise UsageError(f"region {name!r} is not in the configured region set")
    result = run_pipeline(config)
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    grouped = events_by_sds(result.sds_events)
    full_corr = _full_correspondence(result, grouped)
    rows = {sds: row for sds, table in full_corr.items() for row in table if row.region == name}
    stats = region_sector_stats(name, rows)
    _write_table(out_dir, region_stats_table(stats))
    return 0


def _read_jsonl(path: Path) -> list[dict]:
    rows = []
    with path.open(encoding="utf-8") as handle:
        for line in handle:
            if line.strip():
                rows.append(json.loads(line))
    return rows


def _read_snapshot(directory: Path) -> IndicatorSnapshot:
    manifest_path = directory / "snapshot.json"
    if not manifest_path.exists():
        raise DiffError(f"{manifest_path} is missing; not a complete analyze output")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    correspondence: dict[str, tuple[SectorCorrespondenceRow, ...]] = {}
    flows: dict[str, tuple[SectorFlowsRow, ...]] = {}
    for sds, stem in sorted(manifest["active_sds"].items()):
        corr_path = directory / f"table2_{stem}.jsonl"
        flow_path = directory / f"table3_{stem}.jsonl"
        for path in (corr_path, flow_path):
            if not path.exists():
                raise DiffError(f"{path} is missing; snapshot {directory} is incomplete")
        correspondence[sds] = tuple(
            SectorCorrespondenceRow(**obj) for obj in _read_jsonl(corr_path)
        )
        flows[sds] = tuple(SectorFlowsRow(**obj) for obj in _read_jsonl(flow_path))
    return IndicatorSnapshot(
        tuple(manifest["regions"]), manifest["taxonomy"], correspondence, flows
    )


def cmd_diff(t0: str, t1: str, out: str) -> int:
    deltas = snapshot_diff(_read_snapshot(Path(t0)), _read_snapshot(Path(t1)))
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_table(out_dir, delta_table(deltas))
    flagged = sum(
        1
        for cell in deltas
        for metric in (cell.surplus, cell.demand_per_scientist, cell.market_share,
                       cell.intra_over_national_supply)
        if metric.flag
    )
    print(f"diff: {len(deltas)} cells compared, {flagged} flagged", file=sys.stderr)
    return 0


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key-value config file")
    parser.add_argument("--publications", help="publications file (line-delimited records)")
    parser.add_argument("--organizations", help="organization registry CSV")
    parser.add_argument("--roster", help="scientist roster CSV")
    parser.add_argument("--taxonomy", help="sector taxonomy CSV")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--window", help="inclusive year window, e.g. 2001:2003")
    parser.add_argument("--regions", help="|-separated region set override")
    parser.add_argument("--ambiguity", choices=("strict", "all"), help="ambiguous author policy")
    parser.add_argument(
        "--share-threshold",
        type=float,
        dest="share_threshold",
        help="market share dividing the quadrant plane (fraction, default 0.5)",
    )


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    config = load_config(args.config) if args.config else RunConfig()
    return with_overrides(
        config,
        publications=args.publications,
        organizations=args.organizations,
        roster=args.roster,
        taxonomy=args.taxonomy,
        out=args.out,
        window=args.window,
        regions=args.regions,
        ambiguity=args.ambiguity,
        share_threshold=args.share_threshold,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="collabmarket",
        description="Regional supply/demand analytics for university-industry collaborations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check all inputs, write the resolution report")
    _add_run_flags(p_validate)
    p_validate.set_defaults(func=lambda args: cmd_validate(_config_from_args(args)))

    p_analyze = sub.add_parser("analyze", help="run the full pipeline, write every output")
    _add_run_flags(p_analyze)
    p_analyze.set_defaults(func=lambda args: cmd_analyze(_config_from_args(args)))

    p_sector = sub.add_parser("sector", help="tables and figure for one sector")
    _add_run_flags(p_sector)
    p_sector.add_argument("--sds", required=True, help="sector code, e.g. ING-INF/01")
    p_sector.set_defaults(func=lambda args: cmd_sector(_config_from_args(args), args.sds))

    p_region = sub.add_parser("region", help="cross-sector statistics for one region")
    _add_run_flags(p_region)
    p_region.add_argument("--name", required=True, help="region name")
    p_region.set_defaults(func=lambda args: cmd_region(_config_from_args(args), args.name))

    p_diff = sub.add_parser("diff", help="compare two analyze output directories")
    p_diff.add_argument("--t0", required=True, help="earlier analyze output directory")
    p_diff.add_argument("--t1", required=True, help="later analyze output directory")
    p_diff.add_argument("--out", default="diff", help="directory for the delta report")
    p_diff.set_defaults(func=lambda args: cmd_diff(args.t0, args.t1, args.out))

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CollabMarketError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
