"""Exact combinatorics and chain-level cube calculus for finite group actions."""

from .chains import ChainComplex, ChainMap, homology
from .errors import EqcalcError, InvalidInputError, PreconditionError, SizeBoundError, ValidationError
from .groups import FiniteGroup, Subgroup, catalog_group, load_group
from .gsets import GSet, enumerate_gset_iso_classes, tree_leq

__version__ = "0.1.0"

__all__ = [
    "ChainComplex",
    "ChainMap",
    "EqcalcError",
    "FiniteGroup",
    "GSet",
    "InvalidInputError",
    "PreconditionError",
    "SizeBoundError",
    "Subgroup",
    "ValidationError",
    "catalog_group",
    "enumerate_gset_iso_classes",
    "homology",
    "load_group",
    "tree_leq",
]
