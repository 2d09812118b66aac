"""Integral cohomology, cup products and graded K-groups of flat manifolds T^n/G.

Groups are returned as :class:`FinAbGroup`; integers are Python ints of
arbitrary size and rational matrices hold :class:`fractions.Fraction`.
"""

from ._flatk import (
    FinAbGroup,
    NotOriented,
    ResourceBudgetExceeded,
    UnknownLattice,
    UnknownSpace,
    abelianization,
    builtin_lattices,
    builtin_spaces,
    coev_invariant,
    cohomology,
    cokernel,
    cup_pairing,
    dual_isomorphism,
    flag_homology,
    fundamental_group_presentation,
    graded_k_groups,
    homology,
    invariant_ranks,
    invariant_ranks_of_exterior_powers,
    lattice_basis,
    mirror_check,
    mirror_pairs,
    reference_table,
    smith_normal_form,
    spin_lift,
    splitting_test,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
