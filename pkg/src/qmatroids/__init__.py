"""Executable theory of q-matroids over small finite fields.

Rank functions on subspace lattices, cyclic-flat certificates, free
products and direct sums, primary factorization into irreducibles, and
representations by matrices over extension fields, with exhaustive
axiom checkers throughout.
"""

from .errors import BudgetError, InputError
from .gf import BaseField, ExtField, Matrix, ext_field_new, matrix_rank
from .subspace import (
    DirectSumContext,
    QuotientMap,
    Subspace,
    atoms,
    codim1_subspaces,
    covers,
    enumerate_subspaces,
    gaussian_binomial,
    intersect_subspaces,
    lattice_size,
    map_by_matrix,
    orthogonal_complement,
    phi,
    subspaces_of,
    sum_subspaces,
)
from .qmatroid import (
    AxiomVerdict,
    CyclicFlatLattice,
    IsoVerdict,
    QMatroid,
    check_cyclic_flat_axioms,
    check_independence_axioms,
    check_rank_axioms,
    cyclic_flats_by_scan,
    dual_by_definition,
    enumerate_qmatroids,
    full_rank_table,
    is_isomorphic,
    phi_dual,
    rank_tables_equal,
    transport,
)
from .constructions import (
    WeakOrderVerdict,
    direct_sum,
    direct_sum_by_definition,
    free_product,
    free_product_by_formula,
    free_product_chain,
    free_product_independents,
    free_product_rank,
    is_free_product_independent,
    rank_from_independents,
    weak_below_by_flats,
    weak_compare_identity,
)
from .factorization import (
    DmLattice,
    FactorizationReport,
    dm_lattice,
    free_separators,
    irreducibility_verdict,
    is_free_separator,
    is_irreducible,
    pinchpoints,
    primary_factorization,
    vamos_cyclic_flats_scan,
    vamos_qmatroid,
)
from .representation import (
    LinearSetProfile,
    QSystem,
    block_rep,
    coupling_search_size,
    is_evasive,
    is_i_club,
    linear_set_profile,
    qmatroid_from_matrix,
    qmatroid_from_system,
    search_x,
    system_rank,
    verify_free_product_rep,
)

__version__ = "0.1.0"

__all__ = [
    "AxiomVerdict",
    "BaseField",
    "BudgetError",
    "CyclicFlatLattice",
    "DirectSumContext",
    "DmLattice",
    "ExtField",
    "FactorizationReport",
    "InputError",
    "IsoVerdict",
    "LinearSetProfile",
    "Matrix",
    "QMatroid",
    "QSystem",
    "QuotientMap",
    "Subspace",
    "WeakOrderVerdict",
    "atoms",
    "block_rep",
    "coupling_search_size",
    "check_cyclic_flat_axioms",
    "check_independence_axioms",
    "check_rank_axioms",
    "codim1_subspaces",
    "covers",
    "cyclic_flats_by_scan",
    "direct_sum",
    "direct_sum_by_definition",
    "dm_lattice",
    "dual_by_definition",
    "enumerate_qmatroids",
    "enumerate_subspaces",
    "ext_field_new",
    "free_product",
    "free_product_by_formula",
    "free_product_chain",
    "free_product_independents",
    "free_product_rank",
    "free_separators",
    "full_rank_table",
    "gaussian_binomial",
    "intersect_subspaces",
    "irreducibility_verdict",
    "is_evasive",
    "is_free_product_independent",
    "is_free_separator",
    "is_i_club",
    "is_irreducible",
    "is_isomorphic",
    "lattice_size",
    "linear_set_profile",
    "map_by_matrix",
    "matrix_rank",
    "orthogonal_complement",
    "phi",
    "phi_dual",
    "pinchpoints",
    "primary_factorization",
    "qmatroid_from_matrix",
    "qmatroid_from_system",
    "rank_from_independents",
    "rank_tables_equal",
    "search_x",
    "subspaces_of",
    "sum_subspaces",
    "system_rank",
    "transport",
    "vamos_cyclic_flats_scan",
    "vamos_qmatroid",
    "verify_free_product_rep",
    "weak_below_by_flats",
    "weak_compare_identity",
]
