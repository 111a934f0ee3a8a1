#!/usr/bin/env python3
"""
🔍 Parameter Space Search
Enumerates valid parameter tuples up to a bound, classifies them in worker threads,
filters, and returns rows in a deterministic order. Results can be cached as JSON lines.
"""

import asyncio
import hashlib
import itertools
import json
import logging
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterator, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from . import __version__
from .classify import ClassificationReport, SummaryRow, report, summary_row
from .families import PAIR_FAMILIES, Family, FamilyParams, is_valid

logger = logging.getLogger("cohomog7.search")


class SearchSpec(BaseModel):
    """What to enumerate and which rows to keep"""
    model_config = ConfigDict(frozen=True)

    families: Tuple[Family, ...] = Field(..., min_length=1)
    bound: int = Field(..., ge=1)
    r: Optional[int] = Field(default=None, ge=0)
    type_er: bool = False
    eschenburg: bool = False
    output: Literal["table", "json", "csv"] = "table"

    @field_validator('families', mode='before')
    @classmethod
    def split_families(cls, value: Any) -> Any:
        if isinstance(value, str):
            value = [part.strip() for part in value.split(",") if part.strip()]
        if isinstance(value, (list, tuple)):
            families = {v if isinstance(v, Family) else Family(str(v).strip().upper()) for v in value}
            return tuple(sorted(families, key=lambda f: f.value))
        return value

    def key(self) -> str:
        """Cache key over everything that changes the rows, plus the package version"""
        payload = self.model_dump(mode='json', exclude={'output'})
        payload['version'] = __version__
        return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()[:16]

    def accepts(self, rep: ClassificationReport) -> bool:
        if self.r is not None and rep.r != self.r:
            return False
        if self.type_er and not rep.is_type_Er:
            return False
        if self.eschenburg and not rep.eschenburg_ring:
            return False
        return True


@dataclass(frozen=True)
class SearchHit:
    report: Dict[str, Any]
    summary: SummaryRow

    def to_json_line(self) -> str:
        return json.dumps(self.report, ensure_ascii=False)


def _flip(params: FamilyParams, pair: Sequence[str]) -> FamilyParams:
    values = params.values()
    for name in pair:
        values[name] = -values[name]
    return FamilyParams(params.family, **values)


def is_canonical(params: FamilyParams) -> bool:
    """A pair with negative first entry is kept only when its sign flip is invalid"""
    pairs = (('p_minus', 'q_minus'), ('p_plus', 'q_plus')) if params.family in PAIR_FAMILIES else (('p', 'q'),)
    for pair in pairs:
        if getattr(params, pair[0]) < 0 and is_valid(_flip(params, pair)):
            return False
    return True


def enumerate_params(family: Family, bound: int) -> Iterator[FamilyParams]:
    """Valid canonical tuples with non-zero parameters in [-bound, bound]"""
    values = [v for v in range(-bound, bound + 1) if v != 0]
    if family is Family.O:
        candidates = (FamilyParams.o(p, q, m) for p, q in itertools.product(values, repeat=2) for m in (1, 2))
    else:
        candidates = (FamilyParams.pairs(family, *combo) for combo in itertools.product(values, repeat=4))

    for params in candidates:
        if is_valid(params) and is_canonical(params):
            yield params


def _sort_key(rep: ClassificationReport) -> Tuple:
    return (rep.params.family.value, rep.r, tuple(rep.params.values().values()))


def _classify_chunk(chunk: List[FamilyParams]) -> List[ClassificationReport]:
    return [report(params) for params in chunk]


async def _classify_all(params: List[FamilyParams], workers: int, chunk_size: int) -> List[ClassificationReport]:
    """Chunks run in threads with at most `workers` in flight; classification holds the GIL, so there is no speedup"""
    semaphore = asyncio.Semaphore(max(1, workers))

    async def run(chunk: List[FamilyParams]) -> List[ClassificationReport]:
        async with semaphore:
            return await asyncio.to_thread(_classify_chunk, chunk)

    chunks = [params[i:i + chunk_size] for i in range(0, len(params), chunk_size)]
    results = await asyncio.gather(*(run(chunk) for chunk in chunks), return_exceptions=True)

    reports: List[ClassificationReport] = []
    for result in results:
        if isinstance(result, BaseException):
            raise result
        reports.extend(result)
    return reports


class ResultCache:
    """One JSON-lines file per search key"""

    def __init__(self, cache_dir: Path):
        self.cache_dir = Path(cache_dir)
        self.cache_dir.mkdir(parents=True, exist_ok=True)

    def path(self, spec: SearchSpec) -> Path:
        return self.cache_dir / f"search-{spec.key()}.jsonl"

    def load(self, spec: SearchSpec) -> Optional[List[SearchHit]]:
        path = self.path(spec)
        if not path.exists():
            return None
        hits = []
        try:
            with open(path, 'r', encoding='utf-8') as f:
                for line in f:
                    entry = json.loads(line)
                    hits.append(SearchHit(entry['report'], SummaryRow(**entry['summary'])))
        except (json.JSONDecodeError, KeyError, TypeError) as e:
            logger.warning("⚠️ Discarding damaged cache file %s: %s", path, e)
            path.unlink(missing_ok=True)
            return None
        logger.info("📦 Loaded %d cached rows from %s", len(hits), path)
        return hits

    def store(self, spec: SearchSpec, hits: List[SearchHit]) -> None:
        """Write to a temporary file in the cache directory, then move it into place"""
        path = self.path(spec)
        fd, tmp_name = tempfile.mkstemp(dir=self.cache_dir, prefix=f".{path.stem}-", suffix=".tmp")
        try:
            with os.fdopen(fd, 'w', encoding='utf-8', newline='\n') as f:
                for hit in hits:
                    f.write(json.dumps({'report': hit.report, 'summary': hit.summary.to_dict()}, ensure_ascii=False) + "\n")
            os.replace(tmp_name, path)
        except BaseException:
            Path(tmp_name).unlink(missing_ok=True)
            raise
        logger.info("💾 Cached %d rows to %s", len(hits), path)


async def run_search(spec: SearchSpec, workers: int = 4, chunk_size: int = 256,
                     cache_dir: Optional[Path] = None) -> List[SearchHit]:
    """Classify every canonical tuple of the selected families and keep the accepted rows, sorted"""
    cache = ResultCache(cache_dir) if cache_dir else None
    if cache:
        cached = cache.load(spec)
        if cached is not None:
            return cached

    params = [p for family in spec.families for p in enumerate_params(family, spec.bound)]
    logger.info("🔍 Classifying %d tuples in %s up to bound %d", len(params), [f.value for f in spec.families], spec.bound)

    reports = await _classify_all(params, workers, chunk_size)
    kept = sorted((rep for rep in reports if spec.accepts(rep)), key=_sort_key)
    hits = [SearchHit(rep.to_dict(), summary_row(rep)) for rep in kept]

    if cache:
        cache.store(spec, hits)
    return hits
