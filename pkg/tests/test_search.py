#!/usr/bin/env python3
"""
🧪 Tests for parameter space search
"""

import pytest
from pydantic import ValidationError

from src.families import Family, FamilyParams, is_valid
from src.search import ResultCache, SearchSpec, enumerate_params, is_canonical, run_search


class TestSearchSpec:
    """Test search specification parsing"""

    def test_family_string(self):
        """Test comma separated families are normalized"""
        spec = SearchSpec(families="o, n,N", bound=3)
        assert spec.families == (Family.N, Family.O)

    def test_enum_members(self):
        """Test Family members are accepted"""
        assert SearchSpec(families=[Family.L], bound=1).families == (Family.L,)

    @pytest.mark.parametrize("kwargs", [
        {'families': "L", 'bound': 0},
        {'families': "", 'bound': 3},
        {'families': "P", 'bound': 3},
        {'families': "L", 'bound': 3, 'r': -1},
        {'families': "L", 'bound': 3, 'output': "xml"},
    ])
    def test_rejects(self, kwargs):
        """Test invalid specifications"""
        with pytest.raises((ValidationError, ValueError)):
            SearchSpec(**kwargs)

    def test_key(self):
        """Test the cache key ignores the output format only"""
        a = SearchSpec(families="N,O", bound=3, r=3)
        assert a.key() == SearchSpec(families="O,N", bound=3, r=3, output="csv").key()
        assert a.key() != SearchSpec(families="N,O", bound=4, r=3).key()
        assert len(a.key()) == 16


class TestEnumeration:
    """Test canonical enumeration"""

    def test_everything_valid_and_bounded(self):
        """Test enumerated tuples are valid and inside the bound"""
        for family in Family:
            for params in enumerate_params(family, 3):
                assert is_valid(params)
                assert all(abs(v) <= 3 for name, v in params.values().items() if name != 'm')

    def test_l_bound_one(self):
        """Test the only L tuples with entries +-1"""
        labels = [p.label for p in enumerate_params(Family.L, 1)]
        assert labels == ["L(1,1)(1,-1)", "L(1,1)(1,1)"]

    def test_one_representative_per_flip(self):
        """Test a pair and its negation never both appear"""
        seen = {p.label for p in enumerate_params(Family.O, 4)}
        assert "O(2,3:2)" in seen
        assert "O(-2,-3:2)" not in seen

    def test_flip_kept_when_partner_invalid(self):
        """Test a negative first entry stays when the flipped pair breaks a congruence"""
        params = FamilyParams.pairs("L", -3, 1, 1, 1)
        assert is_valid(params)
        assert is_canonical(params)
        assert not is_canonical(FamilyParams.o(-2, 3, 2))


class TestRunSearch:
    """Test the async search"""

    @pytest.mark.asyncio
    async def test_r_three(self):
        """Test N and O rows with r = 3 up to bound 3"""
        hits = await run_search(SearchSpec(families="N,O", bound=3, r=3), workers=2, chunk_size=7)
        labels = [hit.summary.label for hit in hits]
        assert "N(1,1)(2,1)" in labels
        assert "O(2,1:1)" in labels
        assert all(hit.report['r'] == 3 for hit in hits)
        assert labels == sorted(labels, key=lambda label: label[0])

    @pytest.mark.asyncio
    async def test_l_bound_one_type_er_is_empty(self):
        """Test both L tuples with entries +-1 are degenerate"""
        assert await run_search(SearchSpec(families="L", bound=1, type_er=True)) == []

    @pytest.mark.asyncio
    async def test_m_is_never_type_er(self):
        """Test M rows exist but never pass the type E_r filter"""
        all_rows = await run_search(SearchSpec(families="M", bound=5))
        assert all_rows
        assert all("S^3-bundle over S^4" in hit.summary.notes for hit in all_rows)
        assert await run_search(SearchSpec(families="M", bound=5, type_er=True)) == []

    @pytest.mark.asyncio
    async def test_filters_are_sound(self):
        """Test every kept row satisfies every filter"""
        hits = await run_search(SearchSpec(families="L,N,O", bound=3, type_er=True, eschenburg=True))
        assert hits
        for hit in hits:
            assert hit.report['valid']
            assert hit.report['is_type_Er']
            assert hit.report['eschenburg_ring']
            assert hit.report['r'] % 2 == 1

    @pytest.mark.asyncio
    async def test_r_filter_is_complete(self):
        """Test filtering by r keeps exactly the unfiltered rows with that r"""
        everything = await run_search(SearchSpec(families="L,N,O", bound=3))
        filtered = await run_search(SearchSpec(families="L,N,O", bound=3, r=3))
        assert [hit.report for hit in filtered] == [hit.report for hit in everything if hit.report['r'] == 3]

    @pytest.mark.asyncio
    async def test_sorted_by_family_then_r(self):
        """Test deterministic ordering"""
        hits = await run_search(SearchSpec(families="N,O", bound=3), workers=3, chunk_size=5)
        keys = [(hit.report['family'], hit.report['r']) for hit in hits]
        assert keys == sorted(keys)

    @pytest.mark.asyncio
    async def test_worker_count_does_not_change_rows(self):
        """Test results are independent of chunking"""
        spec = SearchSpec(families="O", bound=4)
        one = await run_search(spec, workers=1, chunk_size=1000)
        many = await run_search(spec, workers=4, chunk_size=3)
        assert [hit.report for hit in one] == [hit.report for hit in many]


class TestResultCache:
    """Test the JSON-lines cache"""

    @pytest.mark.asyncio
    async def test_round_trip(self, tmp_path):
        """Test cached rows equal freshly computed rows"""
        spec = SearchSpec(families="N", bound=3)
        fresh = await run_search(spec, cache_dir=tmp_path)
        cache = ResultCache(tmp_path)
        assert cache.path(spec).exists()

        loaded = cache.load(spec)
        assert [hit.report for hit in loaded] == [hit.report for hit in fresh]
        assert [hit.summary for hit in loaded] == [hit.summary for hit in fresh]
        assert [hit.report for hit in await run_search(spec, cache_dir=tmp_path)] == [hit.report for hit in fresh]

    def test_missing(self, tmp_path):
        """Test a cache miss"""
        assert ResultCache(tmp_path / "nested").load(SearchSpec(families="O", bound=2)) is None

    @pytest.mark.parametrize("content", [
        '{"report": {"family": "N"',
        '{"summary": {}}\n',
        '[1, 2]\n',
        '{"report": {}, "summary": {"label": "N(1,1)(2,1)"}}\n',
    ])
    def test_damaged_file_is_discarded(self, tmp_path, content):
        """Test truncated or malformed cache files count as a miss and are removed"""
        spec = SearchSpec(families="N", bound=3)
        cache = ResultCache(tmp_path)
        cache.path(spec).write_text(content, encoding="utf-8")

        assert cache.load(spec) is None
        assert not cache.path(spec).exists()

    @pytest.mark.asyncio
    async def test_damaged_file_is_recomputed(self, tmp_path):
        """Test a search over a truncated cache recomputes and rewrites it"""
        spec = SearchSpec(families="N", bound=3)
        fresh = await run_search(spec)
        cache = ResultCache(tmp_path)
        cache.path(spec).write_text('{"report": {"family": "N"', encoding="utf-8")

        hits = await run_search(spec, cache_dir=tmp_path)
        assert [hit.report for hit in hits] == [hit.report for hit in fresh]
        assert [hit.report for hit in cache.load(spec)] == [hit.report for hit in fresh]

    @pytest.mark.asyncio
    async def test_store_leaves_no_temporary_files(self, tmp_path):
        """Test only the final cache file remains after a store"""
        spec = SearchSpec(families="O", bound=2)
        await run_search(spec, cache_dir=tmp_path)
        assert [p.name for p in tmp_path.iterdir()] == [ResultCache(tmp_path).path(spec).name]
