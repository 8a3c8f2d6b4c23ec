"""Turning outside data into index input.

Three front doors, one contract: each produces (item name, categories)
pairs ready for build_index. The JSONL reader is the plain-data path, the
record categorizer applies a field schema to structured records, and the
text extractor harvests capitalized vocabulary from raw documents. Snapshot
persistence is re-exported here so ingestion callers have one import.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import IngestError
from .index import ALL, ANY, AssociationIndex, build_index
from .snapshot import load as snapshot_load
from .snapshot import save as snapshot_save

__all__ = [
    "load_jsonl",
    "build_from_jsonl",
    "RecordSchema",
    "categorize_records",
    "TextExtractionConfig",
    "WordStat",
    "ExtractionResult",
    "extract_text_categories",
    "load_stoplist",
    "snapshot_save",
    "snapshot_load",
]


# ---------------------------------------------------------------------------
# JSONL


def load_jsonl(
    path: str | Path, any_groups: Iterable[str] = ()
) -> tuple[list[tuple[str, list[str]]], dict[str, tuple[str, str]]]:
    """Read lines of {"name": ..., "categories": [...]} into build input.

    A category written as "Group/Cat" lands in that group (everything after
    the first slash is the category name); bare names go to the implicit
    group. Groups listed in ``any_groups`` get the OR combinator, the rest
    AND. Errors carry the offending line number.
    """
    any_groups = set(any_groups)
    assignments: list[tuple[str, list[str]]] = []
    grouping: dict[str, tuple[str, str]] = {}
    seen: set[str] = set()
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise IngestError(f"line {lineno}: not valid JSON ({exc.msg})") from exc
        if not isinstance(rec, dict):
            raise IngestError(f"line {lineno}: expected an object")
        name = rec.get("name")
        cats = rec.get("categories")
        if not isinstance(name, str) or not name:
            raise IngestError(f"line {lineno}: missing or empty name")
        if not isinstance(cats, list) or not cats:
            raise IngestError(f"line {lineno}: missing or empty categories")
        if name in seen:
            raise IngestError(f"line {lineno}: duplicate item name {name!r}")
        seen.add(name)
        parsed: list[str] = []
        for raw in cats:
            if not isinstance(raw, str) or not raw:
                raise IngestError(f"line {lineno}: bad category {raw!r}")
            if "/" in raw:
                group, cat = raw.split("/", 1)
                comb = ANY if group in any_groups else ALL
                known = grouping.get(cat)
                if known is not None and known != (group, comb):
                    raise IngestError(
                        f"line {lineno}: category {cat!r} already in group "
                        f"{known[0]!r}, cannot move to {group!r}"
                    )
                grouping[cat] = (group, comb)
            else:
                cat = raw
                if cat in grouping:
                    raise IngestError(
                        f"line {lineno}: category {cat!r} used both bare "
                        f"and grouped"
                    )
            parsed.append(cat)
        assignments.append((name, parsed))
    if not assignments:
        raise IngestError("no records")
    return assignments, grouping


def build_from_jsonl(
    path: str | Path, any_groups: Iterable[str] = ()
) -> AssociationIndex:
    assignments, grouping = load_jsonl(path, any_groups)
    return build_index(assignments, grouping)


# ---------------------------------------------------------------------------
# Structured records


@dataclass(frozen=True)
class RecordSchema:
    """How record fields map to categories.

    ``record_labels`` go on every record of the batch (what kind of thing
    these records are). ``field_labels`` attach their categories whenever
    the field is populated, labeling the field's presence; fields in
    ``value_fields`` additionally contribute their value itself as a
    category. With ``strict`` set, a populated field the schema does not
    mention is an error instead of being ignored.
    """

    record_labels: tuple[str, ...] = ()
    field_labels: Mapping[str, str | tuple[str, ...]] = field(default_factory=dict)
    value_fields: frozenset[str] = frozenset()
    strict: bool = False


def _populated(value: object) -> bool:
    return value is not None and value != "" and value != [] and value != ()


def categorize_records(
    records: Iterable[tuple[str, Mapping[str, object]]],
    schema: RecordSchema,
) -> list[tuple[str, list[str]]]:
    """Apply the schema: one item per record, heterogeneous fields welcome."""
    out: list[tuple[str, list[str]]] = []
    for name, fields in records:
        cats: list[str] = list(schema.record_labels)
        for key, value in fields.items():
            if not _populated(value):
                continue
            known = False
            if key in schema.field_labels:
                labels = schema.field_labels[key]
                # a lone string is one label, not a character sequence
                cats.extend((labels,) if isinstance(labels, str) else labels)
                known = True
            if key in schema.value_fields:
                if isinstance(value, (list, tuple)):
                    cats.extend(str(v) for v in value)
                else:
                    cats.append(str(value))
                known = True
            if not known and schema.strict:
                raise IngestError(f"record {name!r}: field {key!r} has no role")
        if not cats:
            raise IngestError(f"record {name!r} yields no categories")
        out.append((name, cats))
    return out


# ---------------------------------------------------------------------------
# Raw text


@dataclass(frozen=True)
class TextExtractionConfig:
    """Filters for harvesting vocabulary from documents.

    Document-frequency thresholds are percentages: words used by more than
    ``broad_threshold`` percent of documents are tiered broad, by less than
    ``detail_threshold`` percent detail, the rest standard. All tiers become
    categories; the tier is reporting metadata.
    """

    stoplist: frozenset[str] = frozenset()
    capitalized_only: bool = True
    skip_sentence_initial: bool = True
    broad_threshold: float = 10.0
    detail_threshold: float = 0.1
    max_categories_per_doc: int = 50

    def __post_init__(self) -> None:
        if not 0 <= self.detail_threshold <= self.broad_threshold <= 100:
            raise ValueError(
                "need 0 <= detail_threshold <= broad_threshold <= 100"
            )
        if self.max_categories_per_doc < 1:
            raise ValueError("max_categories_per_doc must be >= 1")


@dataclass(frozen=True)
class WordStat:
    doc_count: int
    doc_frequency_pct: float
    tier: str  # "broad" | "standard" | "detail"


@dataclass(frozen=True)
class ExtractionResult:
    assignments: tuple[tuple[str, tuple[str, ...]], ...]
    words: dict[str, WordStat]
    skipped: tuple[tuple[str, str], ...]

    def build(self) -> AssociationIndex:
        return build_index(self.assignments)


_SENTENCES = re.compile(r"(?<=[.!?])\s+")
_TOKEN = re.compile(r"\w+", re.UNICODE)


def _harvest(text: str, config: TextExtractionConfig) -> Counter:
    """Counted occurrences of the words that pass the filters."""
    counts: Counter = Counter()
    for sentence in _SENTENCES.split(text):
        for position, token in enumerate(_TOKEN.findall(sentence)):
            if config.skip_sentence_initial and position == 0:
                continue
            if config.capitalized_only and not token[:1].isupper():
                continue
            if token.lower() in config.stoplist:
                continue
            counts[token] += 1
    return counts


def extract_text_categories(
    documents: Iterable[tuple[str, str]],
    config: TextExtractionConfig = TextExtractionConfig(),
) -> ExtractionResult:
    """Harvest per-document vocabulary and tier it by document frequency.

    Documents where nothing survives the filters are skipped and reported,
    not indexed. Per document, at most ``max_categories_per_doc`` words are
    kept, by descending in-document count (alphabetical on ties).
    """
    harvested: list[tuple[str, Counter]] = []
    skipped: list[tuple[str, str]] = []
    doc_freq: Counter = Counter()
    for name, text in documents:
        counts = _harvest(text, config)
        if not counts:
            skipped.append((name, "no tokens survive the filters"))
            continue
        harvested.append((name, counts))
        doc_freq.update(counts.keys())
    if not harvested:
        raise IngestError("no documents survive the filters")

    total = len(harvested)
    words: dict[str, WordStat] = {}
    for word, dc in doc_freq.items():
        pct = 100.0 * dc / total
        if pct > config.broad_threshold:
            tier = "broad"
        elif pct < config.detail_threshold:
            tier = "detail"
        else:
            tier = "standard"
        words[word] = WordStat(doc_count=dc, doc_frequency_pct=pct, tier=tier)

    cap = config.max_categories_per_doc
    assignments = tuple(
        (
            name,
            tuple(
                w
                for w, _ in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[
                    :cap
                ]
            ),
        )
        for name, counts in harvested
    )
    return ExtractionResult(
        assignments=assignments, words=words, skipped=tuple(skipped)
    )


def load_stoplist(path: str | Path) -> frozenset[str]:
    """Newline-delimited UTF-8 word list, folded to lowercase."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return frozenset(w.strip().lower() for w in lines if w.strip())
