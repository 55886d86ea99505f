"""Universal arrows and left adjoints over finite equational structure kinds."""
from .adjoint import Adjunction, HomBijection, check_adjunction_laws
from .axioms import check_kind_axioms
from .builtins import kind as builtin_kind
from .dsl import App, KindSpec, Var, eval_term, parse_kind, parse_kinds, print_kind
from .errors import (
    CertificationError,
    GaftError,
    IllDefinedFunctor,
    KappaUnavailable,
    KindSyntaxError,
    NoFactorization,
    NoFiniteSolutionSet,
    PreconditionError,
    ResourceError,
)
from .finset import (
    FinMap,
    FinSet,
    Subset,
    TupleProduct,
    compose,
    equalizer,
    factor_through,
    identity,
    intersection,
    product,
)
from .functor import (
    ConcreteFunctor,
    builtin_functor,
    builtin_functors,
    check_limit_preservation,
    check_st_axioms,
    forgetful,
)
from .report import Report
from .search import (
    canonical,
    enumerate_homs,
    enumerate_structures,
    is_isomorphic,
)
from .structures import (
    INFINITE,
    Hom,
    Structure,
    closure,
    induced_substructure,
    is_morphism,
    is_structure,
    kappa,
    make_hom,
    product_structure,
)
from .universal import (
    DeltaFamily,
    SolutionSet,
    UniversalArrowResult,
    build_delta,
    certificate,
    check_solset,
    closure_of_image,
    construct_universal,
    factorize,
    induced_into_product,
    solution_set,
    to_dot,
    verify_universality,
)

__version__ = "0.1.0"
