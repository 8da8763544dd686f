"""Substitutions on 2-colored binary trees and their fixed-tree analysis."""

from .engine import (
    ABBA,
    BBAB,
    BUILTINS,
    THUE_MORSE,
    Substreetution,
    apply,
    fixed_point_prefix,
    parse_substreetution,
    resolve_system,
    source,
    theta,
    unsub,
    verify_renormalization,
)
from .trees import (
    EQUAL_TO_DEPTH,
    Patch,
    distance,
    distinct_subpatches,
    dump_patch,
    load_patch,
    parse_patch,
    random_patch,
    save_patch,
)

__version__ = "0.1.0"

__all__ = [
    "ABBA",
    "BBAB",
    "BUILTINS",
    "EQUAL_TO_DEPTH",
    "Patch",
    "Substreetution",
    "THUE_MORSE",
    "apply",
    "distance",
    "distinct_subpatches",
    "dump_patch",
    "fixed_point_prefix",
    "load_patch",
    "parse_patch",
    "parse_substreetution",
    "random_patch",
    "resolve_system",
    "save_patch",
    "source",
    "theta",
    "unsub",
    "verify_renormalization",
    "__version__",
]
