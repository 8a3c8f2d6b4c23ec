"""Exception types shared across the engine.

Everything raised on purpose derives from FacetnavError so callers (CLI,
HTTP service) can catch one base class and map it to an exit code or an
error payload.
"""


class FacetnavError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"


class BuildError(FacetnavError):
    """Invalid input to an index build (duplicate names, empty sets, ...)."""

    code = "build_error"


class UnknownCategoryError(FacetnavError):
    """A selection or lookup referenced a category that does not exist."""

    code = "unknown_category"


class SelectionError(FacetnavError):
    """A selection is malformed (duplicate entry, already-selected delta)."""

    code = "bad_selection"


class StaleCacheError(FacetnavError):
    """A first-click cache was used against an index it was not built from."""

    code = "stale_cache"


class SnapshotError(FacetnavError):
    """A snapshot failed to parse, validate, or match its expected digest."""

    code = "bad_snapshot"


class ShardError(FacetnavError):
    """Shard set is invalid or incompatible (gap, overlap, table mismatch)."""

    code = "bad_shards"


class SizeGuardError(FacetnavError):
    """A dense materialization was requested above the configured size guard."""

    code = "size_guard"


class IngestError(FacetnavError):
    """An input file or record stream could not be turned into build input."""

    code = "ingest_error"


class KeystrokeRejected(FacetnavError):
    """A typed character would have emptied the candidate list.

    The pre-keystroke state is preserved by the caller; the exception carries
    the offending character and the candidates that remain valid.
    """

    code = "keystroke_rejected"

    def __init__(self, character: str, candidates):
        super().__init__(f"keystroke {character!r} would empty the candidate list")
        self.character = character
        self.candidates = candidates
