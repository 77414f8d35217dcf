"""Exact structure-constant toolkit for Novikov, Hom-Novikov and
Hom-Novikov-Poisson algebras over Q and small prime fields."""
from .constructions import (
    alpha_inverse_bracket,
    commutator_bracket,
    derivation_np_product,
    enumerate_endomorphisms,
    find_unity,
    gd_lambda_product,
    involutive_untwist,
    np_yau_twist,
    partial_star_product,
    power_twist,
    tensor_np,
    unity_derivation,
    yau_twist,
)
from .core import (
    Algebra,
    BilinearForm,
    LinearOperator,
    StructureBundle,
    associator,
    make_algebra,
    make_form,
    make_operator,
    map_properties,
    multiply,
    zero_algebra,
)
from .errors import (
    DimensionError,
    FieldMismatchError,
    GuardError,
    HomNovikovError,
    MissingRoleError,
    NotClosedError,
    PreconditionError,
    RestrictionError,
    ScalarError,
)
from .families import FamilySpec, GradedIndex, SparseElement, embed_window, family_map, family_product, window_verify
from .fields import GF, QQ, Field, parse_field
from .identities import CATALOG, KINDS, Identity, Report, Verdict, Witness, check_identity, random_sanity, validate
from .linalg import Subspace
from .quadratic import (
    center,
    check_form_identity,
    derive_quadratic_homlie,
    form_properties,
    lower_central_series,
    nilpotency_report,
    quadratic_novikov_from_involutive,
    quadratic_power_twist,
    twist_form,
)

__version__ = "0.1.0"
