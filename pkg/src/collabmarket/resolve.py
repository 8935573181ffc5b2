"""Name normalization, affiliation resolution, and author attribution.

The same normalization pipeline is used for organization names, aliases and
author surnames so that registry matching and roster matching cannot drift
apart.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .model import (
    UNIVERSITY,
    ENTERPRISE,
    AffiliationResolution,
    AuthorAttribution,
    PublicationRecord,
    Registry,
    ScientistRosterEntry,
)

EXACT = "exact"
ALIAS = "alias"
UNRESOLVED = "unresolved"

UNIQUE = "unique"
AMBIGUOUS_SKIPPED = "ambiguous_skipped"
AMBIGUOUS_ALL = "ambiguous_all"

AMBIGUITY_POLICIES = ("strict", "all")


def _normalize_once(raw: str) -> str:
    # NFKD first so that accented letters split into base + combining mark and
    # compatibility characters (ligatures, fullwidth forms) flatten out.
    decomposed = unicodedata.normalize("NFKD", raw)
    kept: list[str] = []
    for ch in decomposed:
        if unicodedata.combining(ch):
            continue
        kept.append(ch if ch.isalnum() else " ")
    return " ".join("".join(kept).casefold().split())


def normalize_name(raw: str) -> str:
    """Return the canonical matching form of a name.

    Compatibility-decompose, strip diacritics, casefold, replace punctuation
    with spaces, collapse whitespace. The result is idempotent: normalizing an
    already-normalized string changes nothing.

    >>> normalize_name("Università  di ROMA “Tor Vergata”")
    'universita di roma tor vergata'
    """
    text = _normalize_once(raw)
    # casefold can introduce characters that decompose again (rare); iterate
    # to a fixpoint so idempotence holds for arbitrary input.
    for _ in range(3):
        again = _normalize_once(text)
        if again == text:
            break
        text = again
    return text


def normalize_initials(raw: str) -> str:
    """Uppercase the letters of an initials string, dropping punctuation."""
    decomposed = unicodedata.normalize("NFKD", raw)
    letters = [c for c in decomposed if c.isalpha() and not unicodedata.combining(c)]
    return "".join(letters).upper()


@dataclass(frozen=True)
class Resolver:
    """Prebuilt lookup structures over a registry.

    ``ambiguous_aliases`` records every normalized alias shared by more than
    one organization, mapped to the sorted org ids that share it; resolution
    deterministically picks the lowest id, and callers can surface the
    ambiguity as a warning once per alias.
    """

    registry: Registry
    canonical_index: Mapping[str, str]
    alias_index: Mapping[str, str]
    ambiguous_aliases: Mapping[str, tuple[str, ...]]
    roster_index: Mapping[tuple[str, str], tuple[ScientistRosterEntry, ...]]

    @classmethod
    def build(cls, registry: Registry) -> "Resolver":
        canonical_all: dict[str, list[str]] = {}
        alias_all: dict[str, list[str]] = {}
        for org in registry.organizations:
            canonical_all.setdefault(normalize_name(org.canonical_name), []).append(org.org_id)
            for alias in org.aliases:
                normalized = normalize_name(alias)
                if normalized:
                    alias_all.setdefault(normalized, []).append(org.org_id)
        canonical_index = {name: min(ids) for name, ids in canonical_all.items()}
        alias_index = {name: min(ids) for name, ids in alias_all.items()}
        ambiguous = {
            name: tuple(sorted(set(ids)))
            for name, ids in sorted(alias_all.items())
            if len(set(ids)) > 1
        }
        roster_index: dict[tuple[str, str], list[ScientistRosterEntry]] = {}
        for entry in registry.roster:
            roster_index.setdefault((entry.surname, entry.initials), []).append(entry)
        frozen_roster = {
            key: tuple(sorted(entries, key=lambda e: (e.university_id, e.sds)))
            for key, entries in roster_index.items()
        }
        return cls(registry, canonical_index, alias_index, ambiguous, frozen_roster)


def resolve_affiliation(raw: str, resolver: Resolver) -> AffiliationResolution:
    """Match one raw address string against the organization registry.

    Tier 1 is an exact match on the normalized canonical name, tier 2 a match
    on any normalized alias; anything else is unresolved. Ties on a shared
    name are broken deterministically by the lowest org id.
    """
    normalized = normalize_name(raw)
    org_id = resolver.canonical_index.get(normalized)
    if org_id is not None:
        return AffiliationResolution(raw, org_id, EXACT)
    org_id = resolver.alias_index.get(normalized)
    if org_id is not None:
        return AffiliationResolution(raw, org_id, ALIAS)
    return AffiliationResolution(raw, None, UNRESOLVED)


def resolve_publication(pub: PublicationRecord, resolver: Resolver) -> tuple[AffiliationResolution, ...]:
    """Resolve every affiliation of a publication, preserving input order."""
    return tuple(resolve_affiliation(raw, resolver) for raw in pub.affiliations)


def resolved_org_ids(
    resolutions: Iterable[AffiliationResolution], registry: Registry, kind: str
) -> tuple[str, ...]:
    """Distinct resolved org ids of one kind, sorted for determinism."""
    ids = {
        r.org_id
        for r in resolutions
        if r.org_id is not None and registry.by_id[r.org_id].kind == kind
    }
    return tuple(sorted(ids))


def attribute_authors(
    pub: PublicationRecord,
    resolutions: Sequence[AffiliationResolution],
    resolver: Resolver,
    policy: str = "strict",
) -> tuple[AuthorAttribution, ...]:
    """Attach roster universities and sectors to a publication's authors.

    The candidate set for an author is every distinct (university, sds) pair
    from roster entries that match the author's name key, whose university is
    among the publication's resolved university affiliations, and whose active
    years contain the publication year. A single candidate yields a ``unique``
    attribution. With several candidates, policy ``strict`` emits one
    ``ambiguous_skipped`` marker (no sector), while policy ``all`` emits one
    ``ambiguous_all`` attribution per distinct candidate sector, using the
    lowest university id when the same sector appears at several universities.
    """
    if policy not in AMBIGUITY_POLICIES:
        raise ValueError(f"unknown ambiguity policy {policy!r}")
    registry = resolver.registry
    listed = set(resolved_org_ids(resolutions, registry, UNIVERSITY))
    out: list[AuthorAttribution] = []
    for index, author in enumerate(pub.authors):
        entries = resolver.roster_index.get((author.surname, author.initials), ())
        candidates = sorted(
            {
                (e.university_id, e.sds)
                for e in entries
                if e.university_id in listed and pub.year in e.active_years
            }
        )
        if not candidates:
            continue
        if len(candidates) == 1:
            university_id, sds = candidates[0]
            out.append(AuthorAttribution(pub.pub_id, index, university_id, sds, UNIQUE))
        elif policy == "strict":
            out.append(AuthorAttribution(pub.pub_id, index, None, None, AMBIGUOUS_SKIPPED))
        else:
            for sds in sorted({sds for _, sds in candidates}):
                university_id = min(u for u, s in candidates if s == sds)
                out.append(
                    AuthorAttribution(pub.pub_id, index, university_id, sds, AMBIGUOUS_ALL)
                )
    return tuple(out)


def resolution_report_rows(
    pubs: Sequence[PublicationRecord],
    resolutions: Mapping[str, Sequence[AffiliationResolution]],
    attributions: Mapping[str, Sequence[AuthorAttribution]],
) -> list[tuple[str, int, int, int, int, int]]:
    """Per-publication resolution and attribution tallies.

    Columns: pub_id, exact, alias, unresolved, unique, ambiguous. The
    ``ambiguous`` column counts authors (not attribution rows) whose candidate
    set was ambiguous, under either policy.
    """
    rows = []
    for pub in pubs:
        res = resolutions.get(pub.pub_id, ())
        attrs = attributions.get(pub.pub_id, ())
        exact = sum(1 for r in res if r.confidence == EXACT)
        alias = sum(1 for r in res if r.confidence == ALIAS)
        unresolved = sum(1 for r in res if r.confidence == UNRESOLVED)
        unique = sum(1 for a in attrs if a.status == UNIQUE)
        ambiguous = len({a.author_index for a in attrs if a.status != UNIQUE})
        rows.append((pub.pub_id, exact, alias, unresolved, unique, ambiguous))
    return rows
