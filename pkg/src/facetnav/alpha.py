"""Typeahead over long name lists, one character per keystroke.

Characters are treated as categories over the folded (lowercased) names:
either bare characters, so typing order and repeats are irrelevant, or
(character, position) pairs for prefix-style matching. Narrowing runs on
the same engine as the rest of the package, including the fruitfulness
rule: a keystroke that would leave nothing is rejected and the previous
candidates stand.

Candidate lists are item-ID arrays in ascending order; resolve to strings
through :meth:`AlphaIndex.candidate_names`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import KeystrokeRejected, UnknownCategoryError
from .index import AssociationIndex, build_index
from .postings import intersect

POSITION_INDEPENDENT = "pi"
POSITION_DEPENDENT = "pd"
MODES = (POSITION_INDEPENDENT, POSITION_DEPENDENT)

EXACT_MATCH_LIMIT = 100


def _fold(s: str) -> str:
    return s.lower()


def _position_cat(ch: str, pos: int) -> str:
    return f"{ch}@{pos}"


@dataclass(frozen=True)
class TypeState:
    """What has been typed so far and who is still in the running.

    ``typed`` holds the folded keystrokes in order; ``candidates`` the
    surviving item IDs. States are immutable; every accepted keystroke
    returns a fresh one.
    """

    typed: str
    candidates: np.ndarray = field(repr=False)
    completed: bool = False

    @property
    def candidate_count(self) -> int:
        return len(self.candidates)


@dataclass(frozen=True)
class AlphaIndex:
    """Character categories over a fixed name list."""

    mode: str
    names: tuple[str, ...]
    index: AssociationIndex

    def start(self) -> TypeState:
        return TypeState(typed="", candidates=self.index.all_items())

    def candidate_names(self, state_or_ids: TypeState | np.ndarray) -> tuple[str, ...]:
        ids = (
            state_or_ids.candidates
            if isinstance(state_or_ids, TypeState)
            else state_or_ids
        )
        return tuple(self.names[j] for j in ids)

    def exact_matches(self, state: TypeState) -> tuple[int, ...]:
        """Candidates whose folded name equals everything typed so far.

        Position-independent comparison is by character multiset, so the
        flag survives transposed keystrokes; position-dependent comparison
        is verbatim. Only computed for short lists; long ones return
        nothing rather than paying a full scan on every keystroke.
        """
        if not state.typed or len(state.candidates) > EXACT_MATCH_LIMIT:
            return ()
        if self.mode == POSITION_INDEPENDENT:
            want = sorted(state.typed)
            return tuple(
                int(j)
                for j in state.candidates
                if sorted(_fold(self.names[j])) == want
            )
        return tuple(
            int(j) for j in state.candidates if _fold(self.names[j]) == state.typed
        )


def build_alpha_index(names: list[str] | tuple[str, ...], mode: str) -> AlphaIndex:
    """Index a name list for typing, deriving the character inventory
    from the data.

    Duplicate names collapse to a single candidate. Raises on empty input
    or an empty name.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if not names:
        raise ValueError("no names to index")
    unique: list[str] = []
    seen: set[str] = set()
    for name in names:
        if name == "":
            raise ValueError("empty name")
        if name not in seen:
            seen.add(name)
            unique.append(name)

    def cats(name: str) -> list[str]:
        folded = _fold(name)
        if mode == POSITION_INDEPENDENT:
            return sorted(set(folded))
        return [_position_cat(ch, p) for p, ch in enumerate(folded)]

    ix = build_index((name, cats(name)) for name in unique)
    return AlphaIndex(mode=mode, names=tuple(unique), index=ix)


def type_key(
    alpha: AlphaIndex, state: TypeState, character: str
) -> tuple[TypeState, np.ndarray]:
    """One keystroke: (next state, its candidates).

    Repeats of an already-typed character in the position-independent mode
    select nothing new and only extend the typed string. A keystroke whose
    character never occurs (or would empty the list) raises
    KeystrokeRejected carrying the surviving pre-keystroke candidates;
    the caller's state stays valid.
    """
    if state.completed:
        raise ValueError("state is completed; start a new one")
    if len(character) != 1:
        raise ValueError("type one character at a time")
    ch = _fold(character)

    if alpha.mode == POSITION_INDEPENDENT:
        if ch in state.typed:
            nxt = TypeState(typed=state.typed + ch, candidates=state.candidates)
            return nxt, nxt.candidates
        cat_name = ch
    else:
        cat_name = _position_cat(ch, len(state.typed))

    try:
        cat = alpha.index.category_id(cat_name)
    except UnknownCategoryError:
        raise KeystrokeRejected(character, state.candidates) from None
    survivors = intersect(state.candidates, alpha.index.postings(cat))
    if len(survivors) == 0:
        raise KeystrokeRejected(character, state.candidates)
    nxt = TypeState(typed=state.typed + ch, candidates=survivors)
    return nxt, survivors


def complete(alpha: AlphaIndex, state: TypeState) -> tuple[TypeState, np.ndarray]:
    """Negate everything untyped: (completed state, final candidates).

    Position-independent: only names drawing exclusively on the typed
    characters survive. Position-dependent: only names exactly as long as
    the typed prefix. The result may legitimately be empty; that is a
    zero-match answer, not a rejected keystroke.
    """
    if not state.typed:
        raise ValueError("nothing typed yet")
    if state.completed:
        raise ValueError("state is already completed")
    per_item = np.diff(alpha.index.item_indptr)
    if alpha.mode == POSITION_INDEPENDENT:
        want = len(set(state.typed))
    else:
        want = len(state.typed)
    # Candidates already carry every typed category, so set equality
    # reduces to a category-count check.
    local = state.candidates - alpha.index.item_base
    final = state.candidates[per_item[local] == want]
    nxt = TypeState(typed=state.typed, candidates=final, completed=True)
    return nxt, final
