"""Exact computations with polynomial maps, derivations and affine surfaces."""
from .groebner import Ideal, groebner_basis, ideal_member, is_unit_ideal, normal_form
from .kernels import BACKEND
from .keller import PolyMap, chain_rule_check, formal_inverse, invert_exact, is_keller, jacobian
from .lnd import Derivation, exp_map, is_locally_nilpotent
from .numberfield import NumberField, cyclotomic_field
from .poly import Poly, Ring, parse_poly

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Derivation",
    "Ideal",
    "NumberField",
    "Poly",
    "PolyMap",
    "Ring",
    "chain_rule_check",
    "cyclotomic_field",
    "exp_map",
    "formal_inverse",
    "groebner_basis",
    "ideal_member",
    "invert_exact",
    "is_keller",
    "is_locally_nilpotent",
    "is_unit_ideal",
    "jacobian",
    "normal_form",
    "parse_poly",
]
