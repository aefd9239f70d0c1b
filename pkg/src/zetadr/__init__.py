"""High-precision zeta-family values, delta-comb (distributional) representations
and identity checks computed three ways."""
from .dr import DeltaComb, InnerProductResult, TestFn, build_dr, gamma_dr_pairing, inner_product
from .errors import DomainError, NonConvergent, NotConverged, PoleError, ResourceError, SingularEndpoint, ZetaDRError
from .exact import bernoulli, bernoulli_poly, eta_neg, hurwitz_neg, lambda_neg, zeta_neg
from .family import EvalRequest, Evaluation, eta, evaluate, extended, gamma, hurwitz, lambda_, lerch, zeta
from .identities import IdentityReport, TheoremCase, cross_checks, run_theorem, sweep
from .numerics import ConvergencePolicy, SeriesResult, compensated_sum, sum_series
from .quadrature import QuadratureResult, ftr_check, gamma_b, integrate_halfline

__version__ = "0.1.0"
