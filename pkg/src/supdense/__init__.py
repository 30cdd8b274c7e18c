from .core import GraphFunction, GroundSet, TableFunction, density, lovasz_extension
from .density import Engine, densest_subset
from .matroid import CardinalityMatroid, PartitionMatroid

__all__ = [
    "CardinalityMatroid",
    "Engine",
    "GraphFunction",
    "GroundSet",
    "PartitionMatroid",
    "TableFunction",
    "densest_subset",
    "density",
    "lovasz_extension",
]
