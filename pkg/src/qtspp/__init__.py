"""Exact desk-scale toolkit for the q-enumeration of totally symmetric
plane partitions: enumeration against the orbit-counting product formula,
Okada determinant and cofactor identities, shift-operator arithmetic with
telescoping-certificate checking, and recurrence guessing from data.
"""

from .qfield import (
    ONE,
    Poly,
    PrimePoint,
    Q,
    RatFunc,
    XJ,
    XN,
    ZERO,
    det_fraction_free,
    div_exact,
    eval_at,
    poly_gcd,
    poly_lcm,
    solve_linear,
)
from .qcomb import (
    QProductFormula,
    determinant_product,
    determinant_product_ratio,
    orbit_count_total,
    orbit_product,
    q_binomial,
    q_pochhammer,
)
from .tspp import (
    CellDiagram,
    OrbitSet,
    PlanePartition,
    enumerate_tspp,
    generating_polynomial,
    is_totally_symmetric,
    orbit_count,
    orbit_partition,
)
from .okada import (
    CofactorVector,
    IdentityReport,
    OkadaMatrix,
    check_identity,
    identity_reports,
    okada_entry,
    okada_matrix,
    row_summand,
    solve_cofactors,
    verify_determinant,
)
from .ore import (
    OreOperator,
    SequenceTable,
    SummandTable,
    TelescopingCertificate,
    annihilates,
    apply,
    homogenize,
    is_left_multiple,
    right_divide,
    substitute_diagonal,
    verify_telescoping,
)
from .guess import (
    AnsatzStructure,
    GuessReport,
    build_table,
    certify_constant_diagonal,
    guess_operators,
    revalidate,
)

__version__ = "0.1.0"
