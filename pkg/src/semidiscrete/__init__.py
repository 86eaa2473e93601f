"""Order barriers, Faa di Bruno derivatives and stability of semidiscrete schemes."""
from .exact import (
    RankCertificate,
    RationalMatrix,
    det_lemma2,
    det_oracle,
    det_power_vandermonde,
    rank,
    solve_exact,
    vandermonde_product,
)
from .exceptions import (
    BlowUpError,
    CapabilityError,
    ConsistencyWarning,
    DegenerateFitError,
    DomainError,
    EvaluationError,
    PreconditionError,
)
from .fdb import (
    CurveJet,
    JetFunction,
    Tensor,
    build_Dm,
    enumerate_partitions,
    fdb_derivative,
    fdb_recursion_coefficients,
    multinomial,
    partition_order,
    product_rule_derivative,
)
from .order import (
    BarrierCertificate,
    SchemeFunction,
    Stencil,
    barrier_demonstration,
    empirical_order,
    max_order_stencil,
    moments,
    order2r_consequences,
    stencil_from_scheme,
)
from .stability import (
    AmplificationReport,
    InstabilityWitness,
    LinearizedScheme,
    certify_fe_instability,
    is_stable,
    linearize,
    max_amplification,
    max_stable_cfl,
    symbol,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
