"""Exact arithmetic for finite-dimensional Leibniz algebras.

Structure tables over Q or GF(p), structural invariants, subalgebra lattices
over prime fields, lattice and algebra isomorphism, and a small-algebra atlas.
"""

from ._version import __version__
from .algcore import (
    StructureTable,
    Subspace,
    SubspaceKind,
    bracket,
    change_basis,
    check_identity,
    classify_subspace,
    direct_sum,
    generated_subalgebra,
    is_ideal,
    is_leibniz,
    is_lie,
    is_subalgebra,
    opposite_algebra,
    product_space,
    quotient_algebra,
    span,
)
from .errors import (
    BadParams,
    CapExceeded,
    DimensionMismatch,
    DivisionByZero,
    LeibnizError,
    MaximalityViolated,
    MixedFields,
    NotAnIdeal,
    NotLeibniz,
    ParseError,
    RequiresFiniteField,
)
from .exactfield import GF, FieldSpec, Q, Scalar, rref
from .families import (
    abelian,
    almost_abelian,
    almost_nilpotent,
    build_family,
    cyclic_algebra,
    diamond,
    heisenberg,
    sl2,
    split_extension,
)
from .invariants import (
    centre,
    frattini_ideal,
    is_cyclic,
    is_nilpotent,
    is_simple,
    is_solvable,
    is_supersolvable,
    leibniz_kernel,
    maximal_subalgebras,
    minimal_ideals,
    nilradical,
    radical,
    series,
    structure_profile,
)
from .lattice import (
    enumerate_subspaces,
    lattice_automorphisms,
    lattice_fingerprint,
    lattice_isomorphism,
    maximal_chain_lengths,
    subalgebra_lattice,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
