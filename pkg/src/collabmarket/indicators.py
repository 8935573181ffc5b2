"""Regional and sectorial indicators computed from collaboration events.

Conventions shared by every function here:

* NA is represented as ``None``. A ratio is NA exactly when its denominator
  is zero; downstream consumers must render it as the literal string ``NA``.
* Percentages and shares are stored as fractions in [0, 1]; rendering decides
  the scale.
* Rows come back sorted alphabetically by region, one row per configured
  region, including all-zero rows, so tables are rectangular and stable.
* Distribution means used for the rel-to-mean companion columns coerce NA to
  zero and divide by the number of *eligible* regions (those with at least
  one roster scientist in the sector), not by the number of defined values.
"""

from __future__ import annotations

import statistics
from collections import Counter
from dataclasses import dataclass
from math import sqrt
from typing import Iterable, Mapping, Sequence

from .errors import ComputationError, DiffError, ValidationError
from .model import Registry, SDSCollaboration, UECollaboration

WEIGHT_SUM_TOLERANCE = 1e-9

AGGREGATION_NA_POLICIES = ("coerce-zero", "renormalize")

QUADRANT_I = "I"
QUADRANT_II = "II"
QUADRANT_III = "III"
QUADRANT_IV = "IV"


@dataclass(frozen=True)
class RegionalSummary:
    """Supply and demand of one region over the whole corpus (all sectors)."""

    region: str
    supply_intra: int
    supply_extra: int
    supply_national: int
    demand_intra: int
    demand_extra: int
    demand_national: int
    net_difference: int
    market_share: float | None  # intra supply / national demand


@dataclass(frozen=True)
class SectorCorrespondenceRow:
    """Capacity versus demand of one region in one sector."""

    region: str
    scientists: float
    national_demand: int
    surplus: float
    demand_per_scientist: float | None
    demand_per_scientist_rel: float | None


@dataclass(frozen=True)
class SectorFlowsRow:
    """Supply-side flows of one region in one sector."""

    region: str
    national_demand: int
    national_supply: int
    intra_supply: int
    national_supply_per_scientist: float | None
    national_supply_per_scientist_rel: float | None
    intra_supply_per_scientist: float | None
    intra_supply_per_scientist_rel: float | None
    market_share: float | None
    market_share_per_scientist: float | None
    intra_over_national_supply: float | None


@dataclass(frozen=True)
class QuadrantPosition:
    """Placement of one demand-bearing region in the diagnostic plane."""

    region: str
    sds: str
    surplus: float
    market_share: float
    quadrant: str


@dataclass(frozen=True)
class RegionSectorStats:
    """Distribution of demand per scientist across one region's sectors."""

    region: str
    observations: int
    mean: float | None
    standard_error: float | None
    median: float | None
    minimum: float | None
    maximum: float | None
    zero_demand_sds: int


@dataclass(frozen=True)
class AggregateRow:
    """Weighted cross-sector indicators of one region, with rankings."""

    region: str
    demand_per_scientist: float | None
    demand_per_scientist_rank: int | None
    national_supply_per_scientist: float | None
    national_supply_per_scientist_rank: int | None
    intra_supply_per_scientist: float | None
    intra_supply_per_scientist_rank: int | None
    market_share_per_scientist: float | None
    market_share_per_scientist_rank: int | None
    intra_over_national_supply: float | None
    intra_over_national_supply_rank: int | None


@dataclass(frozen=True)
class MetricDelta:
    """One metric compared between two snapshots."""

    value_t0: float | None
    value_t1: float | None
    delta: float | None
    flag: str | None  # "emergent" | "vanished" | None


@dataclass(frozen=True)
class SnapshotDelta:
    """All tracked metrics of one (region, sector) cell compared over time."""

    region: str
    sds: str
    surplus: MetricDelta
    demand_per_scientist: MetricDelta
    market_share: MetricDelta
    intra_over_national_supply: MetricDelta


@dataclass(frozen=True)
class IndicatorSnapshot:
    """Per-sector indicator tables of one analysis run, keyed for diffing."""

    regions: tuple[str, ...]
    taxonomy: Mapping[str, str]  # sds -> uda
    correspondence: Mapping[str, Sequence[SectorCorrespondenceRow]]
    flows: Mapping[str, Sequence[SectorFlowsRow]]


def regional_summary(
    ue_events: Iterable[UECollaboration], regions: Sequence[str]
) -> list[RegionalSummary]:
    """Aggregate university-enterprise events into per-region supply/demand.

    An event supplies its university region and demands into its enterprise
    region; intra-regional events count on both sides of the same region, so
    summed over all regions supply equals demand, both nationally and
    intra-regionally.
    """
    region_set = set(regions)
    supply_intra: Counter[str] = Counter()
    supply_extra: Counter[str] = Counter()
    demand_extra: Counter[str] = Counter()
    for event in ue_events:
        if event.u_region not in region_set or event.e_region not in region_set:
            bad = event.u_region if event.u_region not in region_set else event.e_region
            raise ValidationError(
                f"event for publication {event.pub_id!r} references region {bad!r} "
                "outside the configured region set"
            )
        if event.u_region == event.e_region:
            supply_intra[event.u_region] += 1
        else:
            supply_extra[event.u_region] += 1
            demand_extra[event.e_region] += 1
    rows = []
    for region in sorted(regions):
        s_intra = supply_intra[region]
        s_extra = supply_extra[region]
        d_extra = demand_extra[region]
        s_national = s_intra + s_extra
        d_national = s_intra + d_extra
        share = s_intra / d_national if d_national else None
        rows.append(
            RegionalSummary(
                region,
                s_intra,
                s_extra,
                s_national,
                s_intra,
                d_extra,
                d_national,
                s_national - d_national,
                share,
            )
        )
    return rows


def distribution_mean(
    values: Mapping[str, float | None], eligible: Iterable[str]
) -> float | None:
    """Mean of a per-region indicator over the eligible regions.

    NA values (and regions absent from ``values``) are coerced to zero; the
    divisor is the eligible-region count. Returns None when nothing is
    eligible.
    """
    pool = sorted(set(eligible))
    if not pool:
        return None
    total = 0.0
    for region in pool:
        value = values.get(region)
        if value is not None:
            total += value
    return total / len(pool)


def _rel_to_mean(
    values: Mapping[str, float | None], eligible: Iterable[str]
) -> dict[str, float | None]:
    mean = distribution_mean(values, eligible)
    rel: dict[str, float | None] = {}
    for region, value in values.items():
        rel[region] = value / mean if (value is not None and mean) else None
    return rel


def roster_headcounts(registry: Registry, sds: str) -> dict[str, float]:
    """Fractional scientist headcount of one sector, grouped by region."""
    totals: dict[str, float] = {}
    for entry in registry.roster:
        if entry.sds != sds:
            continue
        region = registry.region_of(entry.university_id)
        totals[region] = totals.get(region, 0.0) + entry.headcount_weight
    return totals


def all_headcounts(registry: Registry) -> dict[str, dict[str, float]]:
    """Headcounts of every taxonomy sector in one pass: sds -> region -> n."""
    totals: dict[str, dict[str, float]] = {sds: {} for sds in registry.taxonomy.sds_codes}
    for entry in registry.roster:
        region = registry.region_of(entry.university_id)
        per_region = totals[entry.sds]
        per_region[region] = per_region.get(region, 0.0) + entry.headcount_weight
    return totals


def sector_correspondence(
    sds: str,
    headcounts: Mapping[str, float],
    sds_events: Iterable[SDSCollaboration],
    regions: Sequence[str],
    capacity_multiplier: float = 1.0,
) -> list[SectorCorrespondenceRow]:
    """Capacity-versus-demand table of one sector.

    ``capacity_multiplier`` scales how many collaborations one scientist is
    assumed able to satisfy; it affects the surplus and the demand-per-
    scientist denominator while the reported headcount stays raw.
    """
    demand: Counter[str] = Counter(
        ev.e_region for ev in sds_events if ev.sds == sds
    )
    scientists = {r: float(headcounts.get(r, 0.0)) for r in regions}
    ratios: dict[str, float | None] = {}
    for region in regions:
        capacity = scientists[region] * capacity_multiplier
        ratios[region] = demand[region] / capacity if capacity > 0 else None
    eligible = [r for r in regions if scientists[r] > 0]
    rel = _rel_to_mean(ratios, eligible)
    rows = []
    for region in sorted(regions):
        capacity = scientists[region] * capacity_multiplier
        rows.append(
            SectorCorrespondenceRow(
                region,
                scientists[region],
                demand[region],
                capacity - demand[region],
                ratios[region],
                rel[region],
            )
        )
    return rows


def sector_flows(
    sds: str,
    headcounts: Mapping[str, float],
    sds_events: Iterable[SDSCollaboration],
    regions: Sequence[str],
) -> list[SectorFlowsRow]:
    """Supply-side flow table of one sector.

    The market share of a region is the fraction of its national demand
    satisfied intra-regionally; it is NA where there is no demand, as is any
    per-scientist ratio where there are no scientists.
    """
    demand: Counter[str] = Counter()
    supply: Counter[str] = Counter()
    intra: Counter[str] = Counter()
    for ev in sds_events:
        if ev.sds != sds:
            continue
        demand[ev.e_region] += 1
        supply[ev.supply_region] += 1
        if ev.supply_region == ev.e_region:
            intra[ev.supply_region] += 1
    scientists = {r: float(headcounts.get(r, 0.0)) for r in regions}
    supply_ratio: dict[str, float | None] = {}
    intra_ratio: dict[str, float | None] = {}
    for region in regions:
        n = scientists[region]
        supply_ratio[region] = supply[region] / n if n > 0 else None
        intra_ratio[region] = intra[region] / n if n > 0 else None
    eligible = [r for r in regions if scientists[r] > 0]
    supply_rel = _rel_to_mean(supply_ratio, eligible)
    intra_rel = _rel_to_mean(intra_ratio, eligible)
    rows = []
    for region in sorted(regions):
        n = scientists[region]
        share = intra[region] / demand[region] if demand[region] else None
        share_per_scientist = share / n if (share is not None and n > 0) else None
        over_national = intra[region] / supply[region] if supply[region] else None
        rows.append(
            SectorFlowsRow(
                region,
                demand[region],
                supply[region],
                intra[region],
                supply_ratio[region],
                supply_rel[region],
                intra_ratio[region],
                intra_rel[region],
                share,
                share_per_scientist,
                over_national,
            )
        )
    return rows


def quadrant_classify(
    surplus: float, market_share: float | None, share_threshold: float = 0.5
) -> str:
    """Quadrant of one region: I deficit/high-share, II surplus/high-share,
    III surplus/low-share, IV deficit/low-share.

    The x divider (surplus = 0) belongs to the surplus side, the y divider
    (share = threshold) to the high side. Raises on an NA share, which marks
    a region that cannot be positioned.
    """
    if market_share is None:
        raise ValueError("a region without demand has no market share to position")
    high = market_share >= share_threshold
    if surplus < 0:
        return QUADRANT_I if high else QUADRANT_IV
    return QUADRANT_II if high else QUADRANT_III


def quadrant_positions(
    sds: str,
    correspondence: Sequence[SectorCorrespondenceRow],
    flows: Sequence[SectorFlowsRow],
    share_threshold: float = 0.5,
) -> list[QuadrantPosition]:
    """Positions of every demand-bearing region of one sector."""
    flows_by_region = {row.region: row for row in flows}
    positions = []
    for corr in sorted(correspondence, key=lambda r: r.region):
        flow = flows_by_region.get(corr.region)
        if flow is None or flow.market_share is None:
            continue
        positions.append(
            QuadrantPosition(
                corr.region,
                sds,
                corr.surplus,
                flow.market_share,
                quadrant_classify(corr.surplus, flow.market_share, share_threshold),
            )
        )
    return positions


def region_sector_stats(
    region: str, correspondence_by_sds: Mapping[str, SectorCorrespondenceRow]
) -> RegionSectorStats:
    """Distribution statistics of demand per scientist across sectors.

    Only sectors where the region has at least one roster scientist count as
    observations; with no observations every statistic is NA, and with one the
    standard error alone is NA.
    """
    ratios = []
    zero_demand = 0
    for sds in sorted(correspondence_by_sds):
        row = correspondence_by_sds[sds]
        if row.scientists <= 0:
            continue
        assert row.demand_per_scientist is not None
        ratios.append(row.demand_per_scientist)
        if row.national_demand == 0:
            zero_demand += 1
    if not ratios:
        return RegionSectorStats(region, 0, None, None, None, None, None, 0)
    n = len(ratios)
    std_error = statistics.stdev(ratios) / sqrt(n) if n > 1 else None
    return RegionSectorStats(
        region,
        n,
        statistics.fmean(ratios),
        std_error,
        statistics.median(ratios),
        min(ratios),
        max(ratios),
        zero_demand,
    )


def sds_weights(sds_events: Iterable[SDSCollaboration]) -> dict[str, float]:
    """Aggregation weight of each collaboration-active sector.

    A sector's weight is its national event count over the total, so weights
    sum to one whenever any events exist.
    """
    counts = Counter(ev.sds for ev in sds_events)
    total = sum(counts.values())
    if not total:
        return {}
    return {sds: counts[sds] / total for sds in sorted(counts)}


def _combine(
    weighted: Sequence[tuple[float, float | None]], na_policy: str
) -> float | None:
    if na_policy == "coerce-zero":
        return sum(w * v for w, v in weighted if v is not None)
    defined = [(w, v) for w, v in weighted if v is not None]
    if not defined:
        return None
    weight_sum = sum(w for w, _ in defined)
    return sum(w * v for w, v in defined) / weight_sum


def rank_regions(values: Sequence[float | None]) -> list[int | None]:
    """Competition ranking, descending: ties share a rank, the next rank
    skips, NA values stay unranked."""
    ranks: list[int | None] = [None] * len(values)
    for i, value in enumerate(values):
        if value is None:
            continue
        ranks[i] = 1 + sum(1 for other in values if other is not None and other > value)
    return ranks


_AGGREGATE_METRICS = (
    ("demand_per_scientist", "correspondence"),
    ("national_supply_per_scientist", "flows"),
    ("intra_supply_per_scientist", "flows"),
    ("market_share_per_scientist", "flows"),
    ("intra_over_national_supply", "flows"),
)


def aggregate_regions(
    correspondence: Mapping[str, Sequence[SectorCorrespondenceRow]],
    flows: Mapping[str, Sequence[SectorFlowsRow]],
    weights: Mapping[str, float],
    regions: Sequence[str],
    na_policy: str = "coerce-zero",
) -> list[AggregateRow]:
    """Weight per-sector indicators into one cross-sector row per region.

    ``weights`` must cover exactly the sectors being aggregated and sum to
    one. The default NA policy coerces undefined sector values to zero; the
    ``renormalize`` policy instead averages over the defined sectors only.
    """
    if na_policy not in AGGREGATION_NA_POLICIES:
        raise ValueError(f"unknown NA policy {na_policy!r}")
    if weights:
        total = sum(weights.values())
        if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
            raise ComputationError(f"sector weights sum to {total!r}, expected 1")
    sds_list = sorted(weights)
    corr_lookup = {
        sds: {row.region: row for row in correspondence.get(sds, ())} for sds in sds_list
    }
    flow_lookup = {sds: {row.region: row for row in flows.get(sds, ())} for sds in sds_list}
    ordered_regions = sorted(regions)
    columns: dict[str, list[float | None]] = {}
    for metric, source in _AGGREGATE_METRICS:
        lookup = corr_lookup if source == "correspondence" else flow_lookup
        column: list[float | None] = []
        for region in ordered_regions:
            weighted = []
            for sds in sds_list:
                row = lookup[sds].get(region)
                value = getattr(row, metric) if row is not None else None
                weighted.append((weights[sds], value))
            column.append(_combine(weighted, na_policy) if sds_list else 0.0)
        columns[metric] = column
    ranks = {metric: rank_regions(columns[metric]) for metric, _ in _AGGREGATE_METRICS}
    rows = []
    for i, region in enumerate(ordered_regions):
        rows.append(
            AggregateRow(
                region,
                columns["demand_per_scientist"][i],
                ranks["demand_per_scientist"][i],
                columns["national_supply_per_scientist"][i],
                ranks["national_supply_per_scientist"][i],
                columns["intra_supply_per_scientist"][i],
                ranks["intra_supply_per_scientist"][i],
                columns["market_share_per_scientist"][i],
                ranks["market_share_per_scientist"][i],
                columns["intra_over_national_supply"][i],
                ranks["intra_over_national_supply"][i],
            )
        )
    return rows


def _delta(value_t0: float | None, value_t1: float | None) -> MetricDelta:
    if value_t0 is None and value_t1 is None:
        return MetricDelta(None, None, None, None)
    if value_t0 is None:
        return MetricDelta(None, value_t1, None, "emergent")
    if value_t1 is None:
        return MetricDelta(value_t0, None, None, "vanished")
    return MetricDelta(value_t0, value_t1, value_t1 - value_t0, None)


def snapshot_diff(t0: IndicatorSnapshot, t1: IndicatorSnapshot) -> list[SnapshotDelta]:
    """Compare two indicator snapshots cell by cell.

    Both snapshots must be computed over the same region set and taxonomy.
    A sector with tables in only one snapshot shows up flagged emergent (only
    in t1) or vanished (only in t0) for every region.
    """
    taxonomy_t0 = dict(t0.taxonomy)
    taxonomy_t1 = dict(t1.taxonomy)
    if taxonomy_t0 != taxonomy_t1:
        mismatched = sorted(
            (set(taxonomy_t0) ^ set(taxonomy_t1))
            | {s for s in set(taxonomy_t0) & set(taxonomy_t1) if taxonomy_t0[s] != taxonomy_t1[s]}
        )
        raise DiffError(f"taxonomies differ; mismatched sds codes: {', '.join(mismatched)}")
    if tuple(sorted(t0.regions)) != tuple(sorted(t1.regions)):
        difference = sorted(set(t0.regions) ^ set(t1.regions))
        raise DiffError(f"region sets differ: {', '.join(difference)}")

    def cell_maps(snapshot: IndicatorSnapshot):
        corr = {
            (sds, row.region): row
            for sds, rows in snapshot.correspondence.items()
            for row in rows
        }
        flow = {
            (sds, row.region): row for sds, rows in snapshot.flows.items() for row in rows
        }
        return corr, flow

    corr0_map, flow0_map = cell_maps(t0)
    corr1_map, flow1_map = cell_maps(t1)
    deltas = []
    all_sds = sorted(set(t0.correspondence) | set(t1.correspondence))
    for region in sorted(t0.regions):
        for sds in all_sds:
            c0, c1 = corr0_map.get((sds, region)), corr1_map.get((sds, region))
            f0, f1 = flow0_map.get((sds, region)), flow1_map.get((sds, region))
            deltas.append(
                SnapshotDelta(
                    region,
                    sds,
                    _delta(
                        c0.surplus if c0 else None,
                        c1.surplus if c1 else None,
                    ),
                    _delta(
                        c0.demand_per_scientist if c0 else None,
                        c1.demand_per_scientist if c1 else None,
                    ),
                    _delta(
                        f0.market_share if f0 else None,
                        f1.market_share if f1 else None,
                    ),
                    _delta(
                        f0.intra_over_national_supply if f0 else None,
                        f1.intra_over_national_supply if f1 else None,
                    ),
                )
            )
    return deltas
