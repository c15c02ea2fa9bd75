"""Congruences versus diagonal subsemigroups of finite semigroups.

The DSC coefficient chi(S) = |Cong(S)| / |Diag(S)| is computed by brute force
for small semigroups, through linked-triple censuses for Rees matrix
semigroups, and realized for any rational in (0, 1] by certified Rees matrix
constructions over cyclic p-groups.
"""

from .errors import ContractError, DomainError, DscError, ParseError, SizeCapError, ValidationError
from .relations import BinaryRelation, Partition, bell
from .groups import FiniteGroup, NormalSubgroup, SymbolicCyclicGroup, group_from_table, normal_subgroups
from .semigroup import DscReport, FiniteSemigroup, dsc_coefficient, semigroup_from_table
from .rees import LinkedTriple, ReesSpec, SymbolicCyclicReesSpec, chi_rees, triple_census
from .constructor import ConstructionCertificate, construct, realize, verify_certificate
from .clifford import CliffordSystem, chi_bound_report, validate_system

__all__ = [
    "BinaryRelation", "Partition", "bell",
    "FiniteGroup", "NormalSubgroup", "SymbolicCyclicGroup", "group_from_table", "normal_subgroups",
    "DscReport", "FiniteSemigroup", "dsc_coefficient", "semigroup_from_table",
    "LinkedTriple", "ReesSpec", "SymbolicCyclicReesSpec", "chi_rees", "triple_census",
    "ConstructionCertificate", "construct", "realize", "verify_certificate",
    "CliffordSystem", "chi_bound_report", "validate_system",
    "DscError", "ValidationError", "SizeCapError", "ContractError", "DomainError", "ParseError",
]
