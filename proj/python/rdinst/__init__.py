"""Model-based quantifier instantiation guided by relevant domains."""

from ._rdinst import (
    BackendError,
    Error,
    ParseError,
    dump_domains,
    normalize,
    relevant_domains,
    solve,
    term_stats,
)

__all__ = [
    "BackendError",
    "Error",
    "ParseError",
    "dump_domains",
    "normalize",
    "relevant_domains",
    "solve",
    "term_stats",
]
