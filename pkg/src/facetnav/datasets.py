"""Synthetic fixtures: name lists, event logs, and corpora with planted
structure, for simulations, benchmarks and demos.

Everything here is deterministic under its seed, and the planted corpora
document their own expected counts so tests can assert against them by
hand rather than by re-deriving.
"""

from __future__ import annotations

import random
from typing import Iterable

_CONSONANTS = "bcdfghjklmnpqrstvwxz"
# A wide nucleus pool keeps per-letter usage flat across the list, so a
# handful of keystrokes carries real information; heavy reuse of a few
# vowels would leave every prefix matching thousands of names.
_NUCLEI = [
    "a", "e", "i", "o", "u", "y",
    "á", "é", "í", "ó", "ú", "ä", "ö", "ü",
]


def personal_names(count: int, seed: int = 0) -> list[str]:
    """Distinct synthetic surnames, consonant-heavy and accent-sprinkled.

    Shaped like Karvek or Mödrint: two nuclei between uniform consonant
    draws. The flat letter statistics are the point (see module docstring);
    list membership and order depend only on count and seed.
    """
    rng = random.Random(seed)
    names: list[str] = []
    seen: set[str] = set()
    while len(names) < count:
        parts = [
            rng.choice(_CONSONANTS),
            rng.choice(_NUCLEI),
            rng.choice(_CONSONANTS),
            rng.choice(_CONSONANTS),
            rng.choice(_NUCLEI),
            rng.choice(_CONSONANTS),
        ]
        if rng.random() < 0.5:
            parts.append(rng.choice(_CONSONANTS))
        name = "".join(parts).capitalize()
        if name not in seen:
            seen.add(name)
            names.append(name)
    return names


_WEEKDAYS = (
    "monday", "tuesday", "wednesday", "thursday", "friday",
    "saturday", "sunday",
)


def weekday_events(
    event_count: int, topic_count: int, seed: int = 0
) -> list[tuple[str, list[str]]]:
    """Events tagged with one weekday and one topic, spread evenly.

    Days and topics cycle deterministically, so once event_count reaches
    7 * topic_count every (weekday, topic) pair occurs: selecting a
    weekday narrows the items about sevenfold while leaving every topic
    available. The seed only shuffles presentation order.
    """
    events = []
    for k in range(event_count):
        day = _WEEKDAYS[k % 7]
        topic = f"topic{(k // 7) % topic_count:03d}"
        events.append((f"event{k:06d}", [day, topic]))
    random.Random(seed).shuffle(events)
    return events


def broad_detail_corpus(
    broad_count: int = 20, details_per_broad: int = 50
) -> list[tuple[str, list[str]]]:
    """Hub-and-spoke corpus with a known head/tail split.

    Each broad category has one item of its own plus one item per detail
    category in its block; detail blocks are disjoint. Relevance scores
    come out to details_per_broad for every broad and 1 for every detail,
    and selecting a broad lists exactly its details_per_broad details.
    """
    items: list[tuple[str, list[str]]] = []
    for b in range(broad_count):
        broad = f"broad{b:02d}"
        items.append((f"hub{b:02d}", [broad]))
        for k in range(details_per_broad):
            detail = f"detail{b:02d}x{k:02d}"
            items.append((f"leaf{b:02d}x{k:02d}", [broad, detail]))
    return items


def mini_articles(doc_count: int = 1000) -> list[tuple[str, str]]:
    """A planted corpus for the text-extraction mechanism.

    With stoplist {"the"}, capitalized-only and sentence-initial skipping
    on, the harvest per document is exactly:

    - "Town" mid-sentence in every document (100% document frequency), so
      no document is ever skipped;
    - "Northland" in documents where j % 10 < 3 (300 of 1,000: 30%),
      always mid-sentence;
    - "Harbor" in documents where j % 20 == 0 (50 of 1,000: 5%);
    - "Relic{j:04d}" unique to document j for j % 10 == 9 (100 docs, 0.1%
      document frequency each);
    - "Beacon" leads a sentence in every document and must never be
      harvested, as must the stoplisted "The" and every lowercase word.
    """
    docs = []
    for j in range(doc_count):
        lines = ["Beacon fires burned all night.", "Snow fell over Town markets."]
        if j % 10 < 3:
            lines.append("Traders reached Northland before the thaw.")
        if j % 20 == 0:
            lines.append("The fleet sheltered in Harbor waters.")
        if j % 10 == 9:
            lines.append(f"A chipped Relic{j:04d} surfaced in the dig.")
        lines.append("Beacon keepers slept at dawn.")
        docs.append((f"doc{j:04d}", " ".join(lines)))
    return docs
