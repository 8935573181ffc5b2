"""Shared factories for the test suite."""

from __future__ import annotations

import pytest

from collabmarket.model import (
    ENTERPRISE,
    UNIVERSITY,
    AuthorName,
    Organization,
    PublicationRecord,
    Registry,
    ScientistRosterEntry,
    SectorTaxonomy,
)

TEST_REGIONS = ("Lazio", "Lombardy", "Sicily", "Veneto")

YEARS = frozenset({2001, 2002, 2003})


def make_org(org_id, kind, region, name=None, aliases=()):
    return Organization(org_id, name or f"{org_id} {kind}", tuple(aliases), kind, region)


def make_pub(pub_id, affiliations, authors=(("rossi", "M"),), year=2002):
    return PublicationRecord(
        pub_id,
        year,
        tuple(AuthorName(surname, initials) for surname, initials in authors),
        tuple(affiliations),
    )


def make_roster(surname, initials, university_id, sds="ING-INF/01", uda="09",
                years=YEARS, weight=1.0):
    return ScientistRosterEntry(surname, initials, university_id, sds, uda,
                                frozenset(years), weight)


@pytest.fixture
def taxonomy():
    return SectorTaxonomy({"ING-INF/01": "09", "FIS/01": "02", "CHIM/07": "03"})


@pytest.fixture
def registry(taxonomy):
    """Two universities, two enterprises, small roster over three sectors."""
    organizations = (
        make_org("U1", UNIVERSITY, "Lazio", "Universita di Roma",
                 aliases=("Univ. Roma", "Rome University")),
        make_org("U2", UNIVERSITY, "Lombardy", "Politecnico di Milano",
                 aliases=("Milan Polytechnic",)),
        make_org("E1", ENTERPRISE, "Lazio", "Acme Research"),
        make_org("E2", ENTERPRISE, "Veneto", "Borg Devices", aliases=("Borg",)),
    )
    roster = (
        make_roster("rossi", "M", "U1"),
        make_roster("rossi", "M", "U2"),                       # ambiguous with the one above
        make_roster("bianchi", "G", "U2", sds="FIS/01", uda="02"),
        make_roster("verdi", "A", "U1", sds="CHIM/07", uda="03", years={2001}),
    )
    return Registry.build(organizations, roster, taxonomy)
