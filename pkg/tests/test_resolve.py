"""Name normalization, registry resolution, and author attribution."""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from collabmarket.model import ENTERPRISE, UNIVERSITY, AuthorName, Registry
from collabmarket.resolve import (
    ALIAS,
    AMBIGUOUS_ALL,
    AMBIGUOUS_SKIPPED,
    EXACT,
    UNIQUE,
    UNRESOLVED,
    Resolver,
    attribute_authors,
    normalize_initials,
    normalize_name,
    resolution_report_rows,
    resolve_affiliation,
    resolve_publication,
    resolved_org_ids,
)

from conftest import make_org, make_pub, make_roster


class TestNormalizeName:
    def test_accents_quotes_case_and_whitespace(self):
        raw = "Università  di ROMA “Tor Vergata”"
        assert normalize_name(raw) == "universita di roma tor vergata"

    def test_punctuation_becomes_single_space(self):
        assert normalize_name("S.p.A. - R&D") == "s p a r d"

    def test_empty_and_symbol_only(self):
        assert normalize_name("") == ""
        assert normalize_name("***") == ""

    def test_digits_survive(self):
        assert normalize_name("Area 51 Labs") == "area 51 labs"

    @given(st.text(max_size=60))
    def test_idempotent(self, raw):
        once = normalize_name(raw)
        assert normalize_name(once) == once

    @given(st.text(max_size=60))
    def test_output_shape(self, raw):
        result = normalize_name(raw)
        assert result == result.strip()
        assert "  " not in result
        assert result == result.casefold()


class TestNormalizeInitials:
    def test_strips_dots_and_upcases(self):
        assert normalize_initials("m.g.") == "MG"
        assert normalize_initials(" A ") == "A"

    def test_letters_only(self):
        assert normalize_initials("J-P") == "JP"


class TestResolver:
    def test_canonical_and_alias_indexes(self, registry):
        resolver = Resolver.build(registry)
        assert resolver.canonical_index["universita di roma"] == "U1"
        assert resolver.alias_index["milan polytechnic"] == "U2"

    def test_alias_collision_lowest_org_id_wins(self, taxonomy):
        organizations = (
            make_org("U1", UNIVERSITY, "Lazio", "First University", aliases=("UniX",)),
            make_org("U2", UNIVERSITY, "Lombardy", "Second University", aliases=("UniX",)),
        )
        registry = Registry.build(organizations, (), taxonomy)
        resolver = Resolver.build(registry)
        assert resolver.alias_index["unix"] == "U1"
        assert resolver.ambiguous_aliases == {"unix": ("U1", "U2")}

    def test_roster_index_groups_homonyms(self, registry):
        resolver = Resolver.build(registry)
        entries = resolver.roster_index[("rossi", "M")]
        assert [e.university_id for e in entries] == ["U1", "U2"]


class TestResolveAffiliation:
    def test_exact_match(self, registry):
        resolver = Resolver.build(registry)
        res = resolve_affiliation("UNIVERSITA DI ROMA", resolver)
        assert (res.org_id, res.confidence) == ("U1", EXACT)

    def test_alias_match(self, registry):
        resolver = Resolver.build(registry)
        res = resolve_affiliation("Borg", resolver)
        assert (res.org_id, res.confidence) == ("E2", ALIAS)

    def test_exact_beats_alias(self, taxonomy):
        organizations = (
            make_org("A1", ENTERPRISE, "Lazio", "Target Name"),
            make_org("A2", ENTERPRISE, "Veneto", "Other Firm", aliases=("Target Name",)),
        )
        registry = Registry.build(organizations, (), taxonomy)
        resolver = Resolver.build(registry)
        assert resolve_affiliation("Target Name", resolver).org_id == "A1"

    def test_unresolved(self, registry):
        resolver = Resolver.build(registry)
        res = resolve_affiliation("Nowhere Institute", resolver)
        assert (res.org_id, res.confidence) == (None, UNRESOLVED)

    def test_resolve_publication_preserves_order(self, registry):
        resolver = Resolver.build(registry)
        pub = make_pub("P1", ["Borg", "Nowhere", "Univ. Roma"])
        resolutions = resolve_publication(pub, resolver)
        assert [r.org_id for r in resolutions] == ["E2", None, "U1"]

    def test_resolved_org_ids_dedup_and_kind(self, registry):
        resolver = Resolver.build(registry)
        pub = make_pub("P1", ["Borg", "Borg Devices", "Univ. Roma", "Acme Research"])
        resolutions = resolve_publication(pub, resolver)
        assert resolved_org_ids(resolutions, registry, ENTERPRISE) == ("E1", "E2")
        assert resolved_org_ids(resolutions, registry, UNIVERSITY) == ("U1",)


class TestAttribution:
    def _resolve(self, registry, pub):
        resolver = Resolver.build(registry)
        return resolver, resolve_publication(pub, resolver)

    def test_unique_match(self, registry):
        pub = make_pub("P1", ["Politecnico di Milano"], authors=[("bianchi", "G")])
        resolver, resolutions = self._resolve(registry, pub)
        (att,) = attribute_authors(pub, resolutions, resolver)
        assert (att.university_id, att.sds, att.status) == ("U2", "FIS/01", UNIQUE)

    def test_year_outside_active_years_blocks(self, registry):
        pub = make_pub("P1", ["Universita di Roma"], authors=[("verdi", "A")], year=2002)
        resolver, resolutions = self._resolve(registry, pub)
        assert attribute_authors(pub, resolutions, resolver) == ()

    def test_unmatched_author_produces_nothing(self, registry):
        pub = make_pub("P1", ["Universita di Roma"], authors=[("neri", "Z")])
        resolver, resolutions = self._resolve(registry, pub)
        assert attribute_authors(pub, resolutions, resolver) == ()

    def test_university_not_in_publication_blocks(self, registry):
        pub = make_pub("P1", ["Acme Research"], authors=[("rossi", "M")])
        resolver, resolutions = self._resolve(registry, pub)
        assert attribute_authors(pub, resolutions, resolver) == ()

    def test_ambiguous_strict_skips_with_no_sds(self, registry):
        pub = make_pub("P1", ["Universita di Roma", "Politecnico di Milano"],
                       authors=[("rossi", "M")])
        resolver, resolutions = self._resolve(registry, pub)
        (att,) = attribute_authors(pub, resolutions, resolver, "strict")
        assert att.status == AMBIGUOUS_SKIPPED
        assert att.sds is None and att.university_id is None

    def test_ambiguous_all_one_per_distinct_sds(self, registry):
        pub = make_pub("P1", ["Universita di Roma", "Politecnico di Milano"],
                       authors=[("rossi", "M")])
        resolver, resolutions = self._resolve(registry, pub)
        atts = attribute_authors(pub, resolutions, resolver, "all")
        # both candidates share ING-INF/01, so one attribution at the lowest id
        assert [(a.university_id, a.sds, a.status) for a in atts] == [
            ("U1", "ING-INF/01", AMBIGUOUS_ALL)
        ]

    def test_single_candidate_from_many_entries_is_unique(self, registry):
        pub = make_pub("P1", ["Universita di Roma"], authors=[("rossi", "M")])
        resolver, resolutions = self._resolve(registry, pub)
        (att,) = attribute_authors(pub, resolutions, resolver)
        assert (att.university_id, att.status) == ("U1", UNIQUE)

    def test_unknown_policy_raises(self, registry):
        pub = make_pub("P1", ["Universita di Roma"])
        resolver, resolutions = self._resolve(registry, pub)
        with pytest.raises(ValueError):
            attribute_authors(pub, resolutions, resolver, "lenient")

    def test_report_rows(self, registry):
        resolver = Resolver.build(registry)
        pub = make_pub("P1", ["Univ. Roma", "Nowhere", "Acme Research"],
                       authors=[("rossi", "M"), ("neri", "Z")])
        resolutions = {"P1": resolve_publication(pub, resolver)}
        attributions = {"P1": attribute_authors(pub, resolutions["P1"], resolver)}
        (row,) = resolution_report_rows([pub], resolutions, attributions)
        # exact=1 (Acme), alias=1 (Univ. Roma), unresolved=1, unique=1, ambiguous=0
        assert row == ("P1", 1, 1, 1, 1, 0)
