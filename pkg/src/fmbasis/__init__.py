"""Filtered multiplicative bases of modular group algebras.

Construct small p-groups as validated Cayley tables, compute the radical
power filtration of their group algebras over GF(p^k), verify and build
filtered multiplicative bases, and exhaustively search for such bases over
finite fields.
"""

from .fields import Field, make_field, parse_field_literal
from .groups import (
    Abelian,
    Dihedral,
    DirectProduct,
    Example16,
    GeneralizedQuaternion,
    Group,
    Metacyclic,
    Quaternion8,
    Semidihedral,
    SemidihedralTwisted,
    build_group,
    parse_group_spec,
)
from .algebra import (
    AlgebraElement,
    DimensionSubgroupReport,
    Filtration,
    GroupAlgebra,
    compute_filtration,
    dimension_subgroup,
    jennings_check,
)
from .basis import (
    BasisCandidate,
    VerificationReport,
    closure_candidate,
    construct_abelian,
    construct_dihedral,
    construct_example16,
    construct_quaternion8,
    construct_for_spec,
    leading_quotient,
    product_basis,
    verify,
)
from .search import (
    SearchConfig,
    SearchReport,
    canonicalize,
    oracle_equivalence,
    search_fmb,
)

__version__ = "0.1.0"
