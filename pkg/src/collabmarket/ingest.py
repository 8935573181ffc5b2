"""Loading and validation of the publication corpus and the registries.

File formats
------------
publications  line-delimited JSON, one record per line, keys ``pub_id``,
              ``year``, ``authors`` (array of ``{surname, initials}``) and
              ``affiliations`` (array of raw strings); UTF-8.
organizations CSV with header ``org_id,kind,region,canonical_name,aliases``;
              aliases are ``|``-separated.
roster        CSV with header ``surname,initials,university_id,sds,uda,
              active_years,headcount_weight``; active_years ``|``-separated.
taxonomy      CSV with header ``sds,uda``.

Loaders raise on the first bad record by default. When a ``diagnostics`` list
is passed, record-level problems are appended to it as messages and the record
is skipped instead, so a validation pass can report many issues at once.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import CollabMarketError, ParseError, ReferentialError, ValidationError
from .model import (
    ENTERPRISE,
    ORG_KINDS,
    UNIVERSITY,
    AffiliationResolution,
    AuthorAttribution,
    AuthorName,
    Organization,
    PublicationRecord,
    Registry,
    ScientistRosterEntry,
    SectorTaxonomy,
)
from .resolve import normalize_initials, normalize_name

ORG_COLUMNS = ("org_id", "kind", "region", "canonical_name", "aliases")
ROSTER_COLUMNS = (
    "surname",
    "initials",
    "university_id",
    "sds",
    "uda",
    "active_years",
    "headcount_weight",
)
TAXONOMY_COLUMNS = ("sds", "uda")


def _report(exc: CollabMarketError, diagnostics: list[str] | None) -> None:
    if diagnostics is None:
        raise exc
    diagnostics.append(str(exc))


def _parse_author(raw: object, path: Path, line_no: int) -> AuthorName:
    if not isinstance(raw, dict) or not isinstance(raw.get("surname"), str) \
            or not isinstance(raw.get("initials"), str):
        raise ParseError(path, line_no, "author entries need string surname and initials")
    surname = normalize_name(raw["surname"])
    initials = normalize_initials(raw["initials"])
    if not surname:
        raise ParseError(path, line_no, f"author surname {raw['surname']!r} is empty once normalized")
    if not 1 <= len(initials) <= 3:
        raise ParseError(path, line_no, f"initials {raw['initials']!r} must yield 1-3 letters")
    return AuthorName(surname, initials)


def _parse_publication(line: str, path: Path, line_no: int) -> PublicationRecord:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(path, line_no, f"bad JSON: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise ParseError(path, line_no, "record must be an object")
    pub_id = obj.get("pub_id")
    year = obj.get("year")
    authors = obj.get("authors")
    affiliations = obj.get("affiliations")
    if not isinstance(pub_id, str) or not pub_id:
        raise ParseError(path, line_no, "pub_id must be a non-empty string")
    if not isinstance(year, int) or isinstance(year, bool):
        raise ParseError(path, line_no, "year must be an integer")
    if not isinstance(authors, list):
        raise ParseError(path, line_no, "authors must be an array")
    if not isinstance(affiliations, list) or not all(isinstance(a, str) for a in affiliations):
        raise ParseError(path, line_no, "affiliations must be an array of strings")
    if not authors:
        raise ValidationError(f"{path}:{line_no}: publication {pub_id!r} has an empty author list")
    if not affiliations or any(not a.strip() for a in affiliations):
        raise ValidationError(
            f"{path}:{line_no}: publication {pub_id!r} needs at least one non-blank affiliation"
        )
    parsed_authors = tuple(_parse_author(a, path, line_no) for a in authors)
    return PublicationRecord(pub_id, year, parsed_authors, tuple(affiliations))


def load_publications(
    path: str | Path,
    window: tuple[int, int] | None = None,
    diagnostics: list[str] | None = None,
) -> list[PublicationRecord]:
    """Load the publication corpus, keeping records whose year is in window.

    Input order is preserved. Duplicate pub_ids are rejected even when the
    duplicate falls outside the window.
    """
    path = Path(path)
    records: list[PublicationRecord] = []
    seen: set[str] = set()
    with path.open(encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = _parse_publication(line, path, line_no)
            except (ParseError, ValidationError) as exc:
                _report(exc, diagnostics)
                continue
            if record.pub_id in seen:
                _report(
                    ValidationError(f"{path}:{line_no}: duplicate pub_id {record.pub_id!r}"),
                    diagnostics,
                )
                continue
            seen.add(record.pub_id)
            if window is not None and not window[0] <= record.year <= window[1]:
                continue
            records.append(record)
    return records


def write_publications(records: Iterable[PublicationRecord], path: str | Path) -> None:
    """Serialize records to the line-delimited publication format."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as handle:
        for record in records:
            obj = {
                "pub_id": record.pub_id,
                "year": record.year,
                "authors": [
                    {"surname": a.surname, "initials": a.initials} for a in record.authors
                ],
                "affiliations": list(record.affiliations),
            }
            handle.write(json.dumps(obj, ensure_ascii=False) + "\n")


def _open_csv(path: Path, expected: tuple[str, ...]) -> tuple[csv.DictReader, object]:
    handle = path.open(encoding="utf-8", newline="")
    reader = csv.DictReader(handle)
    if reader.fieldnames is None:
        handle.close()
        raise ParseError(path, 1, "missing header row")
    missing = [c for c in expected if c not in reader.fieldnames]
    if missing:
        handle.close()
        raise ParseError(path, 1, f"header lacks columns: {', '.join(missing)}")
    return reader, handle


def _load_taxonomy(path: Path, diagnostics: list[str] | None) -> SectorTaxonomy:
    reader, handle = _open_csv(path, TAXONOMY_COLUMNS)
    parent: dict[str, str] = {}
    with handle:
        for row in reader:
            line_no = reader.line_num
            sds = (row["sds"] or "").strip()
            uda = (row["uda"] or "").strip()
            if not sds or not uda:
                _report(ParseError(path, line_no, "sds and uda must be non-empty"), diagnostics)
                continue
            if sds in parent:
                _report(
                    ValidationError(
                        f"{path}:{line_no}: sds {sds!r} listed twice "
                        f"(udas {parent[sds]!r} and {uda!r}); each sds has exactly one parent"
                    ),
                    diagnostics,
                )
                continue
            parent[sds] = uda
    return SectorTaxonomy(parent)


def _load_organizations(
    path: Path, regions: Sequence[str] | None, diagnostics: list[str] | None
) -> list[Organization]:
    reader, handle = _open_csv(path, ORG_COLUMNS)
    region_set = set(regions) if regions is not None else None
    organizations: list[Organization] = []
    seen: set[str] = set()
    with handle:
        for row in reader:
            line_no = reader.line_num
            org_id = (row["org_id"] or "").strip()
            kind = (row["kind"] or "").strip()
            region = (row["region"] or "").strip()
            canonical = (row["canonical_name"] or "").strip()
            if not org_id:
                _report(ParseError(path, line_no, "org_id must be non-empty"), diagnostics)
                continue
            if org_id in seen:
                _report(ValidationError(f"{path}:{line_no}: duplicate org_id {org_id!r}"), diagnostics)
                continue
            if kind not in ORG_KINDS:
                _report(
                    ValidationError(
                        f"{path}:{line_no}: org {org_id!r} has kind {kind!r}; "
                        f"expected one of {', '.join(ORG_KINDS)}"
                    ),
                    diagnostics,
                )
                continue
            if region_set is not None and region not in region_set:
                _report(
                    ValidationError(
                        f"{path}:{line_no}: org {org_id!r} region {region!r} "
                        "is not in the configured region set"
                    ),
                    diagnostics,
                )
                continue
            if not normalize_name(canonical):
                _report(
                    ValidationError(f"{path}:{line_no}: org {org_id!r} canonical name is blank"),
                    diagnostics,
                )
                continue
            aliases = [a.strip() for a in (row["aliases"] or "").split("|") if a.strip()]
            if canonical not in aliases:
                aliases.insert(0, canonical)
            seen.add(org_id)
            organizations.append(Organization(org_id, canonical, tuple(aliases), kind, region))
    return organizations


def _load_roster(
    path: Path,
    by_id: Mapping[str, Organization],
    taxonomy: SectorTaxonomy,
    diagnostics: list[str] | None,
) -> list[ScientistRosterEntry]:
    reader, handle = _open_csv(path, ROSTER_COLUMNS)
    roster: list[ScientistRosterEntry] = []
    with handle:
        for row in reader:
            line_no = reader.line_num
            surname = normalize_name(row["surname"] or "")
            initials = normalize_initials(row["initials"] or "")
            university_id = (row["university_id"] or "").strip()
            sds = (row["sds"] or "").strip()
            uda = (row["uda"] or "").strip()
            if not surname or not 1 <= len(initials) <= 3:
                _report(
                    ParseError(path, line_no, "roster rows need a surname and 1-3 initials"),
                    diagnostics,
                )
                continue
            org = by_id.get(university_id)
            if org is None:
                _report(
                    ReferentialError(
                        f"{path}:{line_no}: roster row for {surname!r} references "
                        f"unknown university_id {university_id!r}"
                    ),
                    diagnostics,
                )
                continue
            if org.kind != UNIVERSITY:
                _report(
                    ReferentialError(
                        f"{path}:{line_no}: org {university_id!r} is a {org.kind}, "
                        "roster entries must point at universities"
                    ),
                    diagnostics,
                )
                continue
            if sds not in taxonomy:
                _report(
                    ReferentialError(f"{path}:{line_no}: sds {sds!r} is not in the taxonomy"),
                    diagnostics,
                )
                continue
            if uda != taxonomy.uda_of(sds):
                _report(
                    ReferentialError(
                        f"{path}:{line_no}: sds {sds!r} belongs to uda "
                        f"{taxonomy.uda_of(sds)!r}, row says {uda!r}"
                    ),
                    diagnostics,
                )
                continue
            try:
                years = frozenset(int(y) for y in (row["active_years"] or "").split("|") if y.strip())
                weight = float(row["headcount_weight"] or "")
            except ValueError:
                _report(
                    ParseError(path, line_no, "active_years must be integers and headcount_weight a number"),
                    diagnostics,
                )
                continue
            if not years:
                _report(ParseError(path, line_no, "active_years must not be empty"), diagnostics)
                continue
            if not weight > 0:
                _report(
                    ValidationError(f"{path}:{line_no}: headcount_weight must be positive"),
                    diagnostics,
                )
                continue
            roster.append(
                ScientistRosterEntry(surname, initials, university_id, sds, uda, years, weight)
            )
    return roster


def load_registries(
    org_path: str | Path,
    roster_path: str | Path,
    taxonomy_path: str | Path,
    regions: Sequence[str] | None = None,
    diagnostics: list[str] | None = None,
) -> Registry:
    """Load and cross-validate the three registries into one model."""
    taxonomy = _load_taxonomy(Path(taxonomy_path), diagnostics)
    organizations = _load_organizations(Path(org_path), regions, diagnostics)
    registry = Registry.build(organizations, (), taxonomy)
    roster = _load_roster(Path(roster_path), registry.by_id, taxonomy, diagnostics)
    return Registry.build(organizations, roster, taxonomy)


@dataclass(frozen=True)
class LoadReport:
    """Corpus construction tallies produced while assembling a run."""

    publications_read: int
    publications_kept: int
    dropped_unresolvable: int
    warnings: tuple[str, ...]


def partition_resolvable(
    pubs: Sequence[PublicationRecord],
    resolutions: Mapping[str, Sequence[AffiliationResolution]],
    keep_unresolvable: bool = False,
) -> tuple[list[PublicationRecord], LoadReport]:
    """Split off publications none of whose affiliations resolved.

    Those records cannot contribute events; by default they are dropped with a
    per-record warning. With ``keep_unresolvable`` they stay in the corpus
    (the event filter will still exclude them) and only the warning remains.
    """
    kept: list[PublicationRecord] = []
    warnings: list[str] = []
    dropped = 0
    for pub in pubs:
        resolvable = any(r.org_id is not None for r in resolutions.get(pub.pub_id, ()))
        if resolvable or keep_unresolvable:
            kept.append(pub)
        if not resolvable:
            dropped += 0 if keep_unresolvable else 1
            warnings.append(f"publication {pub.pub_id!r}: no affiliation resolved")
    return kept, LoadReport(len(pubs), len(kept), dropped, tuple(warnings))


def filter_hard_sciences(
    pubs: Sequence[PublicationRecord],
    attributions: Mapping[str, Sequence[AuthorAttribution]],
    resolutions: Mapping[str, Sequence[AffiliationResolution]],
    registry: Registry,
) -> list[PublicationRecord]:
    """Keep publications that witness a university-industry collaboration.

    A publication is retained exactly when it has at least one author
    attributed to a taxonomy sector and at least one affiliation resolved to a
    domestic enterprise. The operation is idempotent and returns a subset of
    its input in input order.
    """
    kept: list[PublicationRecord] = []
    for pub in pubs:
        has_sector = any(
            a.sds is not None and a.sds in registry.taxonomy
            for a in attributions.get(pub.pub_id, ())
        )
        has_enterprise = any(
            r.org_id is not None and registry.by_id[r.org_id].kind == ENTERPRISE
            for r in resolutions.get(pub.pub_id, ())
        )
        if has_sector and has_enterprise:
            kept.append(pub)
    return kept
