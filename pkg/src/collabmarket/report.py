"""Deterministic rendering of indicator tables and the quadrant figure.

CSV output rounds each column to its declared class, half away from zero,
with NA rendered as the literal string ``NA``. The JSONL twin of a table
carries the same columns with unrounded internal values (shares as fractions,
NA as ``null``) so downstream tooling, including the snapshot diff, loses
nothing to display rounding. Rendering the same table twice yields identical
bytes.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Sequence

from .errors import UsageError
from .indicators import (
    AggregateRow,
    QuadrantPosition,
    RegionalSummary,
    RegionSectorStats,
    SectorCorrespondenceRow,
    SectorFlowsRow,
    SnapshotDelta,
)

# Column rendering classes.
TEXT = "text"
INT = "int"  # exact integers
NUM2 = "num2"  # ratios, 2 decimals
NUM3 = "num3"  # aggregates and statistics, 3 decimals
NUM6 = "num6"  # fractional counts, up to 6 decimals, trailing zeros trimmed
PCT0 = "pct0"  # share rendered as integer percent
PCT2 = "pct2"  # share rendered as percent, 2 decimals
PCT3 = "pct3"  # share rendered as percent, 3 decimals
RANK = "rank"

FORMATS = ("csv", "jsonl")


@dataclass(frozen=True)
class Column:
    name: str
    kind: str


@dataclass(frozen=True)
class RenderedTable:
    """A named grid of typed cells, ready to serialize."""

    name: str
    columns: tuple[Column, ...]
    rows: tuple[tuple, ...]


def round_half_away(value: float, digits: int) -> Decimal:
    """Round to ``digits`` decimals with ties going away from zero.

    Works on the shortest decimal representation of the float, so a value
    printed as 0.565 rounds up to 0.57 regardless of its binary expansion.
    """
    quantum = Decimal(1).scaleb(-digits)
    result = Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_UP)
    return abs(result) if result == 0 else result  # avoid "-0.00"


def _decimal_string(value: float, digits: int) -> str:
    return str(round_half_away(value, digits))


def format_cell(value, kind: str) -> str:
    """Single cell of CSV output."""
    if value is None:
        return "NA"
    if kind == TEXT:
        return str(value)
    if kind in (INT, RANK):
        return str(int(value))
    if kind == NUM2:
        return _decimal_string(value, 2)
    if kind == NUM3:
        return _decimal_string(value, 3)
    if kind == NUM6:
        return format(round_half_away(value, 6).normalize(), "f")
    if kind == PCT0:
        return str(round_half_away(value * 100.0, 0))
    if kind == PCT2:
        return _decimal_string(value * 100.0, 2)
    if kind == PCT3:
        return _decimal_string(value * 100.0, 3)
    raise UsageError(f"unknown column kind {kind!r}")


def _jsonl_value(value, kind: str):
    if value is None or kind == TEXT:
        return value
    if kind in (INT, RANK):
        return int(value)
    return float(value)


def render_table(table: RenderedTable, fmt: str) -> str:
    """Serialize a table to ``csv`` or ``jsonl``; deterministic byte output."""
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow([c.name for c in table.columns])
        for row in table.rows:
            writer.writerow([format_cell(v, c.kind) for v, c in zip(row, table.columns)])
        return buffer.getvalue()
    if fmt == "jsonl":
        lines = []
        for row in table.rows:
            obj = {c.name: _jsonl_value(v, c.kind) for v, c in zip(row, table.columns)}
            lines.append(json.dumps(obj, ensure_ascii=False))
        return "\n".join(lines) + ("\n" if lines else "")
    raise UsageError(f"unknown render format {fmt!r}; expected one of {', '.join(FORMATS)}")


def regional_summary_table(rows: Sequence[RegionalSummary]) -> RenderedTable:
    columns = (
        Column("region", TEXT),
        Column("supply_intra", INT),
        Column("supply_extra", INT),
        Column("supply_national", INT),
        Column("demand_intra", INT),
        Column("demand_extra", INT),
        Column("demand_national", INT),
        Column("net_difference", INT),
        Column("market_share", PCT0),
    )
    grid = tuple(
        (
            r.region,
            r.supply_intra,
            r.supply_extra,
            r.supply_national,
            r.demand_intra,
            r.demand_extra,
            r.demand_national,
            r.net_difference,
            r.market_share,
        )
        for r in rows
    )
    return RenderedTable("table1_regional", columns, grid)


def sector_correspondence_table(sds: str, rows: Sequence[SectorCorrespondenceRow]) -> RenderedTable:
    columns = (
        Column("region", TEXT),
        Column("scientists", NUM6),
        Column("national_demand", INT),
        Column("surplus", NUM6),
        Column("demand_per_scientist", NUM2),
        Column("demand_per_scientist_rel", NUM2),
    )
    grid = tuple(
        (
            r.region,
            r.scientists,
            r.national_demand,
            r.surplus,
            r.demand_per_scientist,
            r.demand_per_scientist_rel,
        )
        for r in rows
    )
    return RenderedTable(f"table2_{sanitize_code(sds)}", columns, grid)


def sector_flows_table(sds: str, rows: Sequence[SectorFlowsRow]) -> RenderedTable:
    columns = (
        Column("region", TEXT),
        Column("national_demand", INT),
        Column("national_supply", INT),
        Column("intra_supply", INT),
        Column("national_supply_per_scientist", NUM2),
        Column("national_supply_per_scientist_rel", NUM2),
        Column("intra_supply_per_scientist", NUM2),
        Column("intra_supply_per_scientist_rel", NUM2),
        Column("market_share", PCT2),
        Column("market_share_per_scientist", PCT2),
        Column("intra_over_national_supply", PCT2),
    )
    grid = tuple(
        (
            r.region,
            r.national_demand,
            r.national_supply,
            r.intra_supply,
            r.national_supply_per_scientist,
            r.national_supply_per_scientist_rel,
            r.intra_supply_per_scientist,
            r.intra_supply_per_scientist_rel,
            r.market_share,
            r.market_share_per_scientist,
            r.intra_over_national_supply,
        )
        for r in rows
    )
    return RenderedTable(f"table3_{sanitize_code(sds)}", columns, grid)


def region_stats_table(stats: RegionSectorStats) -> RenderedTable:
    columns = (
        Column("region", TEXT),
        Column("observations", INT),
        Column("mean", NUM3),
        Column("standard_error", NUM3),
        Column("median", NUM3),
        Column("minimum", NUM3),
        Column("maximum", NUM3),
        Column("zero_demand_sds", INT),
    )
    grid = (
        (
            stats.region,
            stats.observations,
            stats.mean,
            stats.standard_error,
            stats.median,
            stats.minimum,
            stats.maximum,
            stats.zero_demand_sds,
        ),
    )
    return RenderedTable(f"table4_{sanitize_code(stats.region)}", columns, grid)


def aggregate_table(rows: Sequence[AggregateRow]) -> RenderedTable:
    columns = (
        Column("region", TEXT),
        Column("demand_per_scientist", NUM3),
        Column("demand_per_scientist_rank", RANK),
        Column("national_supply_per_scientist", NUM3),
        Column("national_supply_per_scientist_rank", RANK),
        Column("intra_supply_per_scientist", NUM3),
        Column("intra_supply_per_scientist_rank", RANK),
        Column("market_share_per_scientist", PCT3),
        Column("market_share_per_scientist_rank", RANK),
        Column("intra_over_national_supply", NUM3),
        Column("intra_over_national_supply_rank", RANK),
    )
    grid = tuple(
        (
            r.region,
            r.demand_per_scientist,
            r.demand_per_scientist_rank,
            r.national_supply_per_scientist,
            r.national_supply_per_scientist_rank,
            r.intra_supply_per_scientist,
            r.intra_supply_per_scientist_rank,
            r.market_share_per_scientist,
            r.market_share_per_scientist_rank,
            r.intra_over_national_supply,
            r.intra_over_national_supply_rank,
        )
        for r in rows
    )
    return RenderedTable("table5_aggregate", columns, grid)


def delta_table(deltas: Sequence[SnapshotDelta]) -> RenderedTable:
    """Long-format diff: one row per (region, sds, metric)."""
    columns = (
        Column("region", TEXT),
        Column("sds", TEXT),
        Column("metric", TEXT),
        Column("value_t0", NUM6),
        Column("value_t1", NUM6),
        Column("delta", NUM6),
        Column("flag", TEXT),
    )
    metrics = (
        "surplus",
        "demand_per_scientist",
        "market_share",
        "intra_over_national_supply",
    )
    grid = []
    for cell in deltas:
        for metric in metrics:
            entry = getattr(cell, metric)
            grid.append(
                (
                    cell.region,
                    cell.sds,
                    metric,
                    entry.value_t0,
                    entry.value_t1,
                    entry.delta,
                    entry.flag or "",
                )
            )
    return RenderedTable("diff_report", columns, tuple(grid))


def sanitize_code(code: str) -> str:
    """File-name-safe form of a sector code or region name."""
    cleaned = "".join(ch if ch.isalnum() or ch in "_-" else "-" for ch in code)
    return cleaned.strip("-") or "blank"


_SVG_WIDTH = 640
_SVG_HEIGHT = 480
_MARGIN_LEFT = 64
_MARGIN_RIGHT = 24
_MARGIN_TOP = 46
_MARGIN_BOTTOM = 58


def emit_quadrant_svg(
    positions: Sequence[QuadrantPosition], sds: str, share_threshold: float = 0.5
) -> str:
    """Scatter of demand-bearing regions with the two quadrant dividers.

    Pure text output, no external assets; identical input yields identical
    bytes. Raises on an empty position list: an empty plot would hide the
    difference between "no demand anywhere" and a rendering bug.
    """
    if not positions:
        raise ValueError(f"no quadrant positions to plot for sector {sds!r}")
    ordered = sorted(positions, key=lambda p: p.region)
    xs = [p.surplus for p in ordered]
    lo, hi = min(min(xs), 0.0), max(max(xs), 0.0)
    if lo == hi:
        lo, hi = lo - 1.0, hi + 1.0
    else:
        pad = 0.08 * (hi - lo)
        lo, hi = lo - pad, hi + pad

    plot_w = _SVG_WIDTH - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = _SVG_HEIGHT - _MARGIN_TOP - _MARGIN_BOTTOM

    def x_of(value: float) -> float:
        return _MARGIN_LEFT + (value - lo) / (hi - lo) * plot_w

    def y_of(share: float) -> float:
        return _MARGIN_TOP + (1.0 - share) * plot_h

    divider_x = x_of(0.0)
    divider_y = y_of(share_threshold)
    bottom = _MARGIN_TOP + plot_h
    right = _MARGIN_LEFT + plot_w

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_WIDTH}" height="{_SVG_HEIGHT}" '
        f'viewBox="0 0 {_SVG_WIDTH} {_SVG_HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<title>{sds}: capacity surplus vs regional market share</title>',
        f'<rect class="frame" x="{_MARGIN_LEFT}" y="{_MARGIN_TOP}" width="{plot_w}" '
        f'height="{plot_h}" fill="none" stroke="#444444" stroke-width="1"/>',
        f'<text x="{_MARGIN_LEFT}" y="{_MARGIN_TOP - 18}" font-size="14">'
        f"{sds}: who satisfies regional demand</text>",
        # The two quadrant dividers: capacity balance and the share threshold.
        f'<line class="divider" x1="{divider_x:.2f}" y1="{_MARGIN_TOP}" '
        f'x2="{divider_x:.2f}" y2="{bottom}" stroke="#888888" stroke-dasharray="4 3"/>',
        f'<line class="divider" x1="{_MARGIN_LEFT}" y1="{divider_y:.2f}" '
        f'x2="{right}" y2="{divider_y:.2f}" stroke="#888888" stroke-dasharray="4 3"/>',
        f'<text x="{(_MARGIN_LEFT + right) / 2:.2f}" y="{_SVG_HEIGHT - 16}" '
        f'text-anchor="middle">scientist capacity surplus (scientists - national demand)</text>',
        f'<text x="16" y="{(_MARGIN_TOP + bottom) / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {(_MARGIN_TOP + bottom) / 2:.2f})">'
        "regional market share (%)</text>",
        f'<text x="{_MARGIN_LEFT - 6}" y="{y_of(1.0):.2f}" text-anchor="end" '
        f'dominant-baseline="middle">100</text>',
        f'<text x="{_MARGIN_LEFT - 6}" y="{divider_y:.2f}" text-anchor="end" '
        f'dominant-baseline="middle">{format_cell(share_threshold, PCT0)}</text>',
        f'<text x="{_MARGIN_LEFT - 6}" y="{y_of(0.0):.2f}" text-anchor="end" '
        f'dominant-baseline="middle">0</text>',
        f'<text x="{divider_x:.2f}" y="{bottom + 16}" text-anchor="middle">0</text>',
    ]
    for quadrant, qx, qy in (
        ("I", _MARGIN_LEFT + 10, _MARGIN_TOP + 16),
        ("II", right - 18, _MARGIN_TOP + 16),
        ("III", right - 18, bottom - 8),
        ("IV", _MARGIN_LEFT + 10, bottom - 8),
    ):
        parts.append(
            f'<text class="quadrant" x="{qx}" y="{qy}" fill="#999999">{quadrant}</text>'
        )
    for p in ordered:
        cx, cy = x_of(p.surplus), y_of(p.market_share)
        parts.append(
            f'<circle class="point" cx="{cx:.2f}" cy="{cy:.2f}" r="4" fill="#1f5fa8"/>'
        )
        parts.append(
            f'<text class="label" x="{cx + 6:.2f}" y="{cy - 5:.2f}">{p.region}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
