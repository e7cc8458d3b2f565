"""Closed-form quantities for the edge-flip graph dynamics.

Covers the single-edge transition functions and separation, the law of the
fastest time to stationarity and its Gumbel limit, expected hitting times of
the edge-count chain (stable recursion, series form, and a linear-solve
oracle), the deterministic fluid limit, entropy exponents and binomial tail
bounds for supercritical targets, and the large-deviation exponents that
govern when a macroscopic component first appears.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import gammaln

from .logspace import LogNonNegative, log_add, log_sum
from .model import DerivedParams, birth_rate, closest_integer, death_rate

__all__ = [
    "transition_probability",
    "stationary_probability",
    "edge_separation",
    "stationarity_cdf",
    "graph_separation",
    "gumbel_limit_cdf",
    "expected_stationarity_time",
    "holding_mean",
    "step_up_probability",
    "step_down_probability",
    "expected_hitting_step",
    "expected_hitting_step_series",
    "expected_hitting",
    "HittingExpectation",
    "hitting_expectation",
    "expected_hitting_oracle",
    "fluid_time",
    "fluid_trajectory",
    "relative_entropy",
    "EntropyExponent",
    "entropy_exponent",
    "BinomialTail",
    "binomial_tail",
    "cycle_expectation",
    "c_epsilon",
    "RateExponents",
    "rate_functions",
    "rate_functions_small_eps",
]

ORACLE_DIMENSION_CAP = 2000


def _check_time(t: float) -> None:
    if math.isnan(t) or t < 0:
        raise ValueError(f"time must be nonnegative, got {t!r}")


def transition_probability(start: int, end: int, t: float, d: DerivedParams) -> float:
    """Single-edge transition function p_{start,end}(t).

    p01(t) = p (1 - e^{-lambda t}), p11(t) = e^{-lambda t} + p (1 - e^{-lambda t}),
    with lambda the per-pair update rate; the other two follow by normalization.
    """
    if start not in (0, 1) or end not in (0, 1):
        raise ValueError("edge states must be 0 or 1")
    _check_time(t)
    decay = math.exp(-d.update_rate * t)
    mixed = d.p * -math.expm1(-d.update_rate * t)  # p (1 - e^{-lambda t})
    if start == 0:
        p_present = mixed
    else:
        p_present = decay + mixed
    return p_present if end == 1 else 1.0 - p_present


def stationary_probability(state: int, d: DerivedParams) -> float:
    """Stationary law of a single edge: pi(1) = p, pi(0) = q."""
    if state not in (0, 1):
        raise ValueError("edge states must be 0 or 1")
    return d.p if state == 1 else d.q


def edge_separation(t: float, d: DerivedParams) -> float:
    """Separation of one edge process from stationarity: e^{-lambda t}.

    The same value for both starting states, and equals the survival
    function of the per-pair refresh clock.
    """
    _check_time(t)
    return math.exp(-d.update_rate * t)


def stationarity_cdf(t: float, d: DerivedParams) -> float:
    """P(T_s <= t) for the fastest time to stationarity of the whole graph.

    T_s is the maximum of N i.i.d. Exp(update_rate) refresh clocks, so the
    CDF is (1 - e^{-lambda t})^N, evaluated as exp(N log1p(-e^{-lambda t})).
    """
    _check_time(t)
    decay = math.exp(-d.update_rate * t)
    if decay >= 1.0:
        return 0.0
    return math.exp(d.N * math.log1p(-decay))


def graph_separation(t: float, d: DerivedParams) -> float:
    """Separation of the full graph from stationarity: 1 - stationarity_cdf(t)."""
    _check_time(t)
    decay = math.exp(-d.update_rate * t)
    if decay >= 1.0:
        return 1.0
    return -math.expm1(d.N * math.log1p(-decay))


def gumbel_limit_cdf(x: float) -> float:
    """Limit law of alpha T_s - 2 log n + log 2: the Gumbel CDF e^{-e^{-x}}."""
    if x < -700.0:
        return 0.0
    return math.exp(-math.exp(-x))


def _harmonic_number(m: int) -> float:
    if m <= 1_000_000:
        return float(np.sum(1.0 / np.arange(1, m + 1)))
    # Euler-Maclaurin tail; error O(m^-6) is far below double rounding here.
    inv = 1.0 / m
    euler_gamma = 0.5772156649015328606
    return math.log(m) + euler_gamma + 0.5 * inv - inv * inv / 12.0 + inv**4 / 120.0


def expected_stationarity_time(d: DerivedParams) -> float:
    """Exact mean of T_s: H_N / lambda with H_N the N-th harmonic number."""
    return _harmonic_number(d.N) / d.update_rate


def holding_mean(k: int, d: DerivedParams) -> float:
    """Mean holding time of the edge-count chain in state k."""
    return 1.0 / (birth_rate(k, d) + death_rate(k, d))


def step_up_probability(k: int, d: DerivedParams) -> float:
    """Probability that the next jump from k goes to k+1."""
    lam = birth_rate(k, d)
    return lam / (lam + death_rate(k, d))


def step_down_probability(k: int, d: DerivedParams) -> float:
    """Probability that the next jump from k goes to k-1."""
    mu = death_rate(k, d)
    return mu / (birth_rate(k, d) + mu)


def _hitting_step_logs(d: DerivedParams, count: int) -> np.ndarray:
    """log E(tau_k(k+1)) for k = 0..count-1 via the one-step recursion.

    E(tau_0(1)) = (n-1)/(beta N) and, for k >= 1,
    E(tau_k(k+1)) = 1/lambda_k + (mu_k/lambda_k) E(tau_{k-1}(k)),
    accumulated entirely in log space since values grow like e^{Theta(n)}.
    """
    n, alpha, beta, N = d.n, d.alpha, d.beta, d.N
    logs = np.empty(count)
    cur = math.log((n - 1) / (beta * N))
    logs[0] = cur
    for k in range(1, count):
        lam = (N - k) * beta / (n - 1)
        mu = k * alpha
        cur = log_add(-math.log(lam), math.log(mu / lam) + cur)
        logs[k] = cur
    return logs


def expected_hitting_step(i: int, d: DerivedParams) -> LogNonNegative:
    """Expected time for the edge count to first move from i to i+1."""
    if not (0 <= i <= d.N - 1):
        raise ValueError(f"step start must be in [0, {d.N - 1}], got {i}")
    return LogNonNegative(float(_hitting_step_logs(d, i + 1)[i]))


def expected_hitting_step_series(i: int, d: DerivedParams) -> LogNonNegative:
    """Series form of E(tau_i(i+1)) used as a cross-check of the recursion.

    (n-1)(N-i-1)! i! / (beta N!) * sum_{k=0}^{i} C(N, i-k) (alpha (n-1)/beta)^k,
    evaluated with log-gamma and log-sum-exp so factorials of N never
    materialize.
    """
    if not (0 <= i <= d.N - 1):
        raise ValueError(f"step start must be in [0, {d.N - 1}], got {i}")
    n, alpha, beta, N = d.n, d.alpha, d.beta, d.N
    log_prefactor = (
        math.log(n - 1) - math.log(beta) + gammaln(N - i) + gammaln(i + 1) - gammaln(N + 1)
    )
    log_ratio = math.log(alpha * (n - 1) / beta)
    k = np.arange(i + 1)
    j = i - k  # binomial index
    log_terms = gammaln(N + 1) - gammaln(j + 1) - gammaln(N - j + 1) + k * log_ratio
    peak = float(np.max(log_terms))
    total = peak + math.log(float(np.sum(np.exp(log_terms - peak))))
    return LogNonNegative(float(log_prefactor) + total)


def expected_hitting(j: int, i: int, d: DerivedParams) -> LogNonNegative:
    """Expected first-passage time of the edge count from j up to i.

    Sum of the one-step expectations for k = j..i-1 (strong Markov property),
    accumulated in log space.
    """
    if not (0 <= j < i <= d.N):
        raise ValueError(f"need 0 <= j < i <= {d.N}, got j={j}, i={i}")
    logs = _hitting_step_logs(d, i)
    return LogNonNegative(float(log_sum(logs[j:i])))


@dataclass(frozen=True, slots=True)
class HittingExpectation:
    """An expected first-passage record: start count, target count, value.

    Values satisfy the splitting identity
    value(j, i) = value(j, k) + value(k, i) for j < k < i.
    """

    j: int
    i: int
    value: LogNonNegative


def hitting_expectation(j: int, i: int, d: DerivedParams) -> HittingExpectation:
    """expected_hitting packaged with its endpoints."""
    return HittingExpectation(j=j, i=i, value=expected_hitting(j, i, d))


def expected_hitting_oracle(j: int, i: int, d: DerivedParams) -> float:
    """First-step linear-solve oracle for E(tau_j(i)).

    Solves the tridiagonal system (lambda_k + mu_k) x_k - lambda_k x_{k+1}
    - mu_k x_{k-1} = 1 for k < i with absorbing x_i = 0 (mu_0 = 0 reflects
    at zero) and returns x_j.  The elimination runs in exact rational
    arithmetic: the system's condition number grows like the answer itself
    (e^{Theta(n)}), which destroys any floating-point solve long before the
    answer leaves double range.  The result must still fit a double.
    """
    if not (0 <= j < i <= d.N):
        raise ValueError(f"need 0 <= j < i <= {d.N}, got j={j}, i={i}")
    if i > ORACLE_DIMENSION_CAP:
        raise ValueError(
            f"oracle dimension {i} exceeds the elimination cap {ORACLE_DIMENSION_CAP}"
        )
    n1 = d.n - 1
    alpha = Fraction(d.alpha)
    birth_scale = Fraction(d.beta) / n1
    lam = [(d.N - k) * birth_scale for k in range(i)]
    mu = [k * alpha for k in range(i)]
    one = Fraction(1)
    # forward elimination (Thomas): diag[k] x_k - lam[k] x_{k+1} = rhs[k]
    diag = [None] * i
    rhs = [None] * i
    diag[0] = lam[0] + mu[0]
    rhs[0] = one
    for k in range(1, i):
        factor = mu[k] / diag[k - 1]
        diag[k] = lam[k] + mu[k] - factor * lam[k - 1]
        rhs[k] = one + factor * rhs[k - 1]
    # back substitution with x_i = 0
    x = rhs[i - 1] / diag[i - 1]
    for k in range(i - 2, j - 1, -1):
        x = (rhs[k] + lam[k] * x) / diag[k]
    return float(x)


def fluid_time(c_start: float, c_end: float, d: DerivedParams) -> float:
    """Time for the fluid limit of edge count / n to flow from c_start to c_end.

    Valid when both densities sit strictly on the same side of the fixed
    point beta/(2 alpha) with c_end closer to it; the value is
    -log((beta - 2 alpha c_end)/(beta - 2 alpha c_start)) / alpha.
    """
    for name, c in (("c_start", c_start), ("c_end", c_end)):
        if math.isnan(c) or c < 0:
            raise ValueError(f"{name} must be a nonnegative density, got {c!r}")
    fixed_point = d.beta / (2.0 * d.alpha)
    below = 0 <= c_start < c_end < fixed_point
    above = fixed_point < c_end < c_start
    if not (below or above):
        raise ValueError(
            "densities must satisfy c_start < c_end < beta/(2 alpha) or "
            f"beta/(2 alpha) < c_end < c_start; got c_start={c_start}, "
            f"c_end={c_end} with beta/(2 alpha)={fixed_point}"
        )
    ratio = (d.beta - 2.0 * d.alpha * c_end) / (d.beta - 2.0 * d.alpha * c_start)
    return -math.log(ratio) / d.alpha


def fluid_trajectory(t: float, c_start: float, d: DerivedParams) -> float:
    """Deterministic limit curve of edge count / n started from density c_start:
    (beta/(2 alpha)) (1 - e^{-alpha t}) + c_start e^{-alpha t}."""
    _check_time(t)
    if math.isnan(c_start) or c_start < 0:
        raise ValueError(f"c_start must be a nonnegative density, got {c_start!r}")
    fixed_point = d.beta / (2.0 * d.alpha)
    decay = math.exp(-d.alpha * t)
    return fixed_point * -math.expm1(-d.alpha * t) + c_start * decay


def relative_entropy(a: float, p: float) -> float:
    """Bernoulli relative entropy D(a || p) = a log(a/p) + (1-a) log((1-a)/(1-p))."""
    if not (0.0 <= a <= 1.0):
        raise ValueError(f"a must be in [0, 1], got {a!r}")
    if not (0.0 < p < 1.0):
        raise ValueError(f"p must be in (0, 1), got {p!r}")
    total = 0.0
    if a > 0.0:
        total += a * math.log(a / p)
    if a < 1.0:
        total += (1.0 - a) * math.log((1.0 - a) / (1.0 - p))
    return total


@dataclass(frozen=True, slots=True)
class EntropyExponent:
    """Exact and asymptotic exponent of the stationary tail at density c."""

    i: int
    exact: float
    asymptotic: float


def entropy_exponent(c: float, d: DerivedParams) -> EntropyExponent:
    """N D(i/N || p) at i = [c n], with its n-scale asymptotic form.

    exact      = N D(i/N || p)
    asymptotic = n (c log(2 alpha c / beta) - c + beta/(2 alpha))
    The two differ by an O(1) amount at fixed c.
    """
    if math.isnan(c) or c <= 0:
        raise ValueError(f"density c must be positive, got {c!r}")
    i = closest_integer(c * d.n)
    if not (0 < i < d.N):
        raise ValueError(f"[c n] = {i} must lie strictly inside (0, {d.N})")
    exact = d.N * relative_entropy(i / d.N, d.p)
    asymptotic = d.n * (
        c * math.log(2.0 * d.alpha * c / d.beta) - c + d.beta / (2.0 * d.alpha)
    )
    return EntropyExponent(i=i, exact=exact, asymptotic=asymptotic)


@dataclass(frozen=True, slots=True)
class BinomialTail:
    """Exact stationary tail P(Bin(N, p) >= i) with entropy-form bounds.

    The bounds (8i)^{-1/2} e^{-N D} <= tail <= e^{-N D} bracket the exact
    value whenever i/N > p (bounds_valid); they are reported as logs because
    they underflow long before the bracket stops being informative.
    """

    i: int
    log_probability: float
    log_lower_bound: float
    log_upper_bound: float
    bounds_valid: bool

    @property
    def probability(self) -> float:
        return math.exp(self.log_probability)

    @property
    def lower_bound(self) -> float:
        return math.exp(self.log_lower_bound)

    @property
    def upper_bound(self) -> float:
        return math.exp(self.log_upper_bound)


def binomial_tail(i: int, d: DerivedParams) -> BinomialTail:
    """Exact P(Bin(N, p) >= i) by compensated log-space summation.

    Terms are accumulated from the far tail (k = N downwards) with exact
    compensated addition, after rescaling by the peak log term.
    """
    if not (0 <= i <= d.N):
        raise ValueError(f"count must be in [0, {d.N}], got {i}")
    N, p = d.N, d.p
    if i == 0:
        return BinomialTail(
            i=0,
            log_probability=0.0,
            log_lower_bound=math.nan,
            log_upper_bound=math.nan,
            bounds_valid=False,
        )
    k = np.arange(i, N + 1)
    log_pmf = (
        gammaln(N + 1)
        - gammaln(k + 1)
        - gammaln(N - k + 1)
        + k * math.log(p)
        + (N - k) * math.log1p(-p)
    )
    peak = float(np.max(log_pmf))
    # k runs upward, so reversing sums from the smallest far-tail terms first.
    total = math.fsum(np.exp(log_pmf[::-1] - peak).tolist())
    log_tail = min(peak + math.log(total), 0.0)
    divergence = relative_entropy(i / N, p)
    log_upper = -N * divergence
    log_lower = log_upper - 0.5 * math.log(8.0 * i)
    return BinomialTail(
        i=i,
        log_probability=log_tail,
        log_lower_bound=log_lower,
        log_upper_bound=log_upper,
        bounds_valid=(i / N) > p,
    )


def cycle_expectation(time_above: float, tail) -> LogNonNegative:
    """Renewal identity for the mean regenerative cycle: E(time above)/tail.

    `tail` may be a plain probability or a LogNonNegative (for tails far
    below double-precision range).
    """
    if math.isnan(time_above) or time_above < 0:
        raise ValueError(f"time_above must be nonnegative, got {time_above!r}")
    if isinstance(tail, LogNonNegative):
        log_tail = tail.log_value
    else:
        if math.isnan(tail) or tail <= 0.0:
            raise ValueError(f"tail probability must be positive, got {tail!r}")
        log_tail = math.log(tail)
    if log_tail == float("-inf"):
        raise ValueError("tail probability must be positive")
    if log_tail > 1e-12:
        raise ValueError(f"tail must be a probability, got log tail {log_tail}")
    if time_above == 0.0:
        return LogNonNegative.from_linear(0.0)
    return LogNonNegative(math.log(time_above) - log_tail)


def c_epsilon(eps: float) -> float:
    """Edge density at which the static graph's largest component occupies a
    fraction eps of the vertices: -log(1 - eps) / (2 eps); always > 1/2."""
    if not (0.0 < eps < 1.0):
        raise ValueError(f"eps must be in (0, 1), got {eps!r}")
    return -math.log1p(-eps) / (2.0 * eps)


@dataclass(frozen=True, slots=True)
class RateExponents:
    """Per-vertex large-deviation exponents for component emergence.

    k:  exponent of the edge-count route, c_eps log(2 c_eps) + 1/2 - c_eps
    i1: exponent of the direct component route,
        -eps log(1 - e^{-eps}) + eps log eps + (1-eps) log(1-eps) + eps(1-eps)
    """

    k: float
    i1: float


def rate_functions(eps: float) -> RateExponents:
    """Both emergence exponents at fraction eps.

    The edge-route exponent additionally needs 2 c_eps - 1 < 1, i.e. eps
    below ~0.7968.  Small-eps behavior: k ~ eps^2/16 and i1 ~ eps^3/8.
    """
    if not (0.0 < eps < 1.0):
        raise ValueError(f"eps must be in (0, 1), got {eps!r}")
    ce = c_epsilon(eps)
    if not (0.0 < 2.0 * ce - 1.0 < 1.0):
        raise ValueError(
            f"edge-route exponent needs 2 c_eps - 1 in (0, 1); c_eps={ce} at eps={eps}"
        )
    k = ce * math.log(2.0 * ce) + 0.5 - ce
    i1 = (
        -eps * math.log(-math.expm1(-eps))
        + eps * math.log(eps)
        + (1.0 - eps) * math.log1p(-eps)
        + eps * (1.0 - eps)
    )
    return RateExponents(k=k, i1=i1)


def rate_functions_small_eps(eps: float) -> RateExponents:
    """Leading-order small-eps approximations eps^2/16 and eps^3/8."""
    if not (0.0 < eps < 1.0):
        raise ValueError(f"eps must be in (0, 1), got {eps!r}")
    return RateExponents(k=eps * eps / 16.0, i1=eps**3 / 8.0)
