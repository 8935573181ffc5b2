"""Domain model: publications, registries, and derived collaboration events.

Every type here is an immutable value object. Loaders (module ``ingest``) and
derivation functions (modules ``resolve`` and ``collab``) are responsible for
enforcing the invariants documented on each class; the classes themselves stay
dumb so they are cheap to construct in tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import ValidationError

UNIVERSITY = "university"
ENTERPRISE = "enterprise"
ORG_KINDS = (UNIVERSITY, ENTERPRISE)


@dataclass(frozen=True)
class AuthorName:
    """Author name key as indexed in bibliographies.

    ``surname`` is stored in normalized form (see ``resolve.normalize_name``)
    and ``initials`` as 1-3 uppercase letters without punctuation, so that two
    occurrences of the same person compare equal.
    """

    surname: str
    initials: str


@dataclass(frozen=True)
class PublicationRecord:
    """One indexed article: identity, year, author keys, raw address strings.

    Affiliations are kept verbatim; resolution against the organization
    registry happens later and never mutates the record.
    """

    pub_id: str
    year: int
    authors: tuple[AuthorName, ...]
    affiliations: tuple[str, ...]


@dataclass(frozen=True)
class Organization:
    """Registry entry for a university or a domestically located enterprise.

    ``aliases`` always contains the canonical name itself plus any alternative
    spellings; all matching is done on normalized forms.
    """

    org_id: str
    canonical_name: str
    aliases: tuple[str, ...]
    kind: str
    region: str


@dataclass(frozen=True)
class ScientistRosterEntry:
    """University researcher with a declared sector and fractional headcount.

    ``headcount_weight`` supports fractional values (e.g. thirds, for rosters
    averaged over a three-year window) and must be positive.
    """

    surname: str
    initials: str
    university_id: str
    sds: str
    uda: str
    active_years: frozenset[int]
    headcount_weight: float


@dataclass(frozen=True)
class SectorTaxonomy:
    """Scientific disciplinary sectors (SDS) and their parent areas (UDA)."""

    parent_uda: Mapping[str, str]

    @property
    def sds_codes(self) -> tuple[str, ...]:
        return tuple(sorted(self.parent_uda))

    @property
    def udas(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.parent_uda.values())))

    def __contains__(self, sds: object) -> bool:
        return sds in self.parent_uda

    def uda_of(self, sds: str) -> str:
        return self.parent_uda[sds]


@dataclass(frozen=True)
class Registry:
    """Immutable bundle of the loaded registries, shared by every stage."""

    organizations: tuple[Organization, ...]
    roster: tuple[ScientistRosterEntry, ...]
    taxonomy: SectorTaxonomy
    by_id: Mapping[str, Organization]

    @classmethod
    def build(
        cls,
        organizations: tuple[Organization, ...] | list[Organization],
        roster: tuple[ScientistRosterEntry, ...] | list[ScientistRosterEntry],
        taxonomy: SectorTaxonomy,
    ) -> "Registry":
        by_id: dict[str, Organization] = {}
        for org in organizations:
            if org.org_id in by_id:
                raise ValidationError(f"duplicate org_id {org.org_id!r}")
            by_id[org.org_id] = org
        return cls(tuple(organizations), tuple(roster), taxonomy, by_id)

    def kind_of(self, org_id: str) -> str:
        return self.by_id[org_id].kind

    def region_of(self, org_id: str) -> str:
        return self.by_id[org_id].region


@dataclass(frozen=True)
class AffiliationResolution:
    """Outcome of matching one raw address string against the registry.

    ``org_id`` is set exactly when ``confidence`` is not ``unresolved``.
    """

    raw: str
    org_id: str | None
    confidence: str  # "exact" | "alias" | "unresolved"


@dataclass(frozen=True)
class AuthorAttribution:
    """Assignment of one publication author to a university and an SDS.

    ``sds`` and ``university_id`` are set for statuses ``unique`` and
    ``ambiguous_all``; an ``ambiguous_skipped`` row marks an author whose
    roster candidates conflicted and was therefore left unattributed.
    """

    pub_id: str
    author_index: int
    university_id: str | None
    sds: str | None
    status: str  # "unique" | "ambiguous_skipped" | "ambiguous_all"


@dataclass(frozen=True)
class UECollaboration:
    """One university-enterprise collaboration event for one publication."""

    pub_id: str
    university_id: str
    u_region: str
    enterprise_id: str
    e_region: str
    year: int


@dataclass(frozen=True)
class SDSCollaboration:
    """One sector-enterprise collaboration event for one publication.

    ``supply_region`` is the region of the university whose roster author
    carried the sector into the publication.
    """

    pub_id: str
    sds: str
    uda: str
    supply_region: str
    enterprise_id: str
    e_region: str
    year: int


@dataclass(frozen=True)
class CorpusTotals:
    """Headline event counts over a derived corpus."""

    ue_events: int
    sds_events: int
    universities: int
    enterprises: int
    active_sds: int
