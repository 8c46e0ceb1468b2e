"""photonstat: exact photon-number statistics of photon-subtracted and
photon-added optical states, with a verification catalog of closed forms."""

__version__ = "0.1.0"

from .channels import (
    ChannelSpec,
    amplify,
    attenuate,
    binomial_closure_check,
    max_abs_diff,
    negbinomial_closure_check,
)
from .errors import (
    ClosedFormDomainError,
    ExtrapolationError,
    ImpossibleEventError,
    InsufficientStatisticsError,
    ParameterError,
    PhotonStatError,
    SeriesDivergenceError,
)
from .herald import (
    BayesConsistencyReport,
    HeraldConfig,
    HeraldResult,
    coherent_bayes_consistency,
    exact_heralded_conditional,
    posterior_given_addition,
    posterior_given_subtraction,
    simulate_heralded_subtraction,
    success_prob_given_n,
    tv_distance,
)
from .mgf import (
    MgfPoint,
    closed_form_M,
    closed_form_N,
    mgf_M,
    mgf_M_point,
    mgf_N,
    mgf_N_point,
    moments_from_closed_form,
    probability_via_derivative,
    raw_moment,
)
from .ops import (
    MeanShiftReport,
    OpRecord,
    add,
    added_negative_factorial_moment,
    covariance_double_sum,
    mean_shift_analysis,
    subtract,
    subtracted_factorial_moment,
)
from .states import (
    DEFAULT_TAIL_EPS,
    Family,
    MomentReport,
    PhotonNumberDistribution,
    StateSpec,
    build_distribution,
    factorial_moment,
    from_probs,
    moments,
    negative_factorial_moment,
    parity,
    point_mass,
)
