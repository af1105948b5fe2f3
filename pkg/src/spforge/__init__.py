"""Mutations of strongly primitive species with potentials over finite fields."""

from .dreps import DecoratedRep, mutate_rep, reflect_sink, reflect_source
from .errors import InputError, InternalError, MathError, SpforgeError
from .fields import FieldTower, extend_base, make_tower
from .nondeg import SequenceQuery, is_sequence_nondegenerate, search_sequence_nondegenerate
from .pathalg import Elem, Morphism, PathAlgebra
from .potentials import cyc_deriv, jacobian_dim, normalize_cyclic
from .quivers import Arrow, ExchangeMatrix, WeightedQuiver, mutate_matrix, mutate_wq
from .samples import running_example
from .spmut import SP, SpeciesWithPotential, base_change, involution_witness, mutate, premutate, restrict, split
from .unfold import Unfolding, check_unfolding, composite_mutate, obstruction_witness

__version__ = "0.1.0"

__all__ = [
    "Arrow",
    "DecoratedRep",
    "Elem",
    "ExchangeMatrix",
    "FieldTower",
    "InputError",
    "InternalError",
    "MathError",
    "Morphism",
    "PathAlgebra",
    "SP",
    "SequenceQuery",
    "SpeciesWithPotential",
    "SpforgeError",
    "Unfolding",
    "WeightedQuiver",
    "base_change",
    "check_unfolding",
    "composite_mutate",
    "cyc_deriv",
    "extend_base",
    "involution_witness",
    "is_sequence_nondegenerate",
    "jacobian_dim",
    "make_tower",
    "mutate",
    "mutate_matrix",
    "mutate_rep",
    "mutate_wq",
    "normalize_cyclic",
    "obstruction_witness",
    "premutate",
    "reflect_sink",
    "reflect_source",
    "restrict",
    "running_example",
    "search_sequence_nondegenerate",
    "split",
]
