"""Dynamical gcd trees over pf-rings and constructive normality of R[X] and R{f}."""
from __future__ import annotations

from .errors import (
    DynnormError,
    MixedBackends,
    NotMonic,
    NotNormalWitnessFailure,
    ParseError,
    PreconditionViolated,
    RelationInvalid,
    ResourceLimit,
    UnsupportedCapability,
)
from .etale import (
    AIsZero,
    InR,
    RfRing,
    TateData,
    crucial_factor,
    rf_decompose,
    rf_normality_witness,
    tate_formula,
    tate_lemma_witness,
    trace_matrix,
    trace_split,
)
from .grobner import GroebnerBasis, MPoly, buchberger, ideal_member, radical_member
from .kronecker import (
    IntegralCert,
    SplittingTower,
    ideal_integral_divide,
    kronecker_cert,
    symmetrize,
    weighted_homogeneity_check,
)
from .normality import (
    ComaximalCert,
    MembershipWitness,
    membership_witness_domain,
    membership_witness_nzd,
    membership_witness_pf,
    verify_integral_relation,
)
from .poly import BiPolynomial, Polynomial, QuotientAlg, monic_divmod, nzd_poly_split, subresultant_prs
from .rings import (
    QQ,
    ZZ,
    Cap,
    Elem,
    IntegralRelation,
    MultivarPoly,
    PrimeField,
    Product,
    QuadInt,
    Rationals,
    Integers,
    UnivarPoly,
    comaximal_coefficients,
    normality_witness,
    parse_ring_spec,
    pf_split,
    saturation_zero_test,
)
from .tree import GcdTree, LeafCert, NodeRing, collapse_tree, gcd_tree
from .verify import VerifyReport, verify

__version__ = "0.1.0"
