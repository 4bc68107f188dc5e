"""Finite hypergraphs as k-ary structures: homomorphisms, universal Horn class
membership, CSP classification and Ehrenfeucht-Fraisse games."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    Homomorphism,
    Hypergraph,
    KStructure,
    direct_power,
    direct_product,
    disjoint_union,
    induced_substructure,
    set_closure,
    to_hypergraph,
    to_kstructure,
)
from .errors import BudgetExhausted, FormatError, HornlabError  # noqa: E402
from .hom import Budget, hom_count, hom_enumerate, hom_exists  # noqa: E402
from .membership import member, power_embedding  # noqa: E402
from .polymorphism import classify, cyclic_polymorphism  # noqa: E402
