"""Network data model: interaction functions with analytic metadata, the
``Network`` container consumed by every solver, and constructors mapping the
standard model families (input-output, network games, interbank lending,
cross-holdings, clearing-payment systems) into ``(f, W, eps)`` form.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter, NotInvertible
from .matgraph import (
    SPECTRAL_TOL,
    as_matrix,
    as_vector,
    linear_solve,
    spectral_radius,
)

INF = math.inf


# ---------------------------------------------------------------------------
# Interaction functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClampedAffine:
    """``f(t) = min(max(offset + gain * t, lower), upper)``.

    ``gain`` must be nonnegative; ``lower < upper`` whenever both are
    finite.  The derivative at a clamp breakpoint takes the one-sided value
    from the interior of the unclamped region (i.e. ``gain``), matching the
    small-removal-shock convention used by the impact measure.
    """

    offset: float = 0.0
    gain: float = 1.0
    lower: float = -INF
    upper: float = INF

    def __post_init__(self):
        if not (self.gain >= 0.0):
            raise InvalidParameter("gain", "must be nonnegative")
        if self.lower >= self.upper:
            raise InvalidParameter("lower/upper", "requires lower < upper")
        if not (math.isfinite(self.offset) and math.isfinite(self.gain)):
            raise InvalidParameter("offset/gain", "must be finite")

    def __call__(self, t):
        return min(max(self.offset + self.gain * t, self.lower), self.upper)

    def lipschitz(self):
        return self.gain

    def is_monotone(self):
        return True

    def is_bounded(self):
        return math.isfinite(self.lower) and math.isfinite(self.upper)

    def bounds(self):
        return self.lower, self.upper

    def derivative(self, t):
        z = self.offset + self.gain * t
        return self.gain if self.lower <= z <= self.upper else 0.0


@dataclass(frozen=True)
class RogersVeraart:
    """Discontinuous clearing response: ``beta * t`` below the threshold,
    the cap above it.  Bounded above by ``max(beta * threshold, cap)`` and
    unbounded below; no Lipschitz constant exists.
    """

    beta: float
    threshold: float
    cap: float

    def __post_init__(self):
        if not (0.0 < self.beta < 1.0):
            raise InvalidParameter("beta", "must lie in (0, 1)")
        if not (self.cap > 0.0):
            raise InvalidParameter("cap", "must be positive")
        if not math.isfinite(self.threshold):
            raise InvalidParameter("threshold", "must be finite")

    def __call__(self, t):
        return self.beta * t if t < self.threshold else self.cap

    def lipschitz(self):
        return None

    def is_monotone(self):
        return self.beta * self.threshold <= self.cap

    def is_bounded(self):
        return False

    def bounds(self):
        return -INF, max(self.beta * self.threshold, self.cap)


# ---------------------------------------------------------------------------
# Network
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Network:
    """An interactive network ``x = f(xW + eps)``.

    ``w`` is the sensitivity matrix (entry ``(i, j)`` scales agent ``i``'s
    influence on agent ``j``), ``functions`` the per-agent interaction
    functions, ``shock`` the shock vector.  Immutable; safe to share.
    """

    w: np.ndarray
    functions: tuple
    shock: np.ndarray

    def __post_init__(self):
        w = as_matrix(self.w)
        shock = as_vector(self.shock, w.shape[0], "shock")
        if len(self.functions) != w.shape[0]:
            raise InvalidParameter("functions", f"expected {w.shape[0]} entries")
        w.flags.writeable = False
        shock.flags.writeable = False
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "shock", shock)
        object.__setattr__(self, "functions", tuple(self.functions))
        object.__setattr__(self, "_profile", _clamped_profile(self.functions))

    @property
    def n(self):
        return self.w.shape[0]

    def clamped_profile(self):
        """``(offset, gain, lower, upper)`` arrays when every interaction
        function is clamped-affine, else ``None``."""
        return self._profile

    def inputs(self, x):
        """The pre-response vector ``xW + eps``."""
        return np.asarray(x, dtype=float) @ self.w + self.shock

    def apply(self, x):
        """One application of ``T x = f(xW + eps)``."""
        z = self.inputs(x)
        prof = self._profile
        if prof is not None:
            off, gain, lo, hi = prof
            return np.clip(off + gain * z, lo, hi)
        return np.array([f(t) for f, t in zip(self.functions, z)])

    def residual(self, x):
        """``max_j |x_j - f_j((xW)_j + eps_j)|``."""
        x = as_vector(x, self.n, "x")
        return float(np.max(np.abs(x - self.apply(x)))) if self.n else 0.0

    def derivative_profile(self, z):
        """Componentwise ``f'`` at the input vector ``z``; ``None`` when some
        function is not differentiable (Rogers-Veraart)."""
        values = np.zeros(self.n)
        for j, f in enumerate(self.functions):
            if not isinstance(f, ClampedAffine):
                return None
            values[j] = f.derivative(z[j])
        return values


def _clamped_profile(functions):
    if not all(isinstance(f, ClampedAffine) for f in functions):
        return None
    off = np.array([f.offset for f in functions])
    gain = np.array([f.gain for f in functions])
    lo = np.array([f.lower for f in functions])
    hi = np.array([f.upper for f in functions])
    for a in (off, gain, lo, hi):
        a.flags.writeable = False
    return off, gain, lo, hi


@dataclass(frozen=True)
class NetworkMetadata:
    """Analytic metadata: Lipschitz vector (``None`` if some function has no
    Lipschitz constant), boundedness, monotonicity, and the lattice bounds
    when every function is bounded."""

    beta: object
    bounded: bool
    monotone: bool
    lattice: object


def network_metadata(net):
    betas = [f.lipschitz() for f in net.functions]
    beta = None if any(b is None for b in betas) else np.array(betas, dtype=float)
    bounded = all(f.is_bounded() for f in net.functions)
    monotone = all(f.is_monotone() for f in net.functions)
    lattice = None
    if bounded:
        lo = np.array([f.bounds()[0] for f in net.functions])
        hi = np.array([f.bounds()[1] for f in net.functions])
        lattice = (lo, hi)
    return NetworkMetadata(beta=beta, bounded=bounded, monotone=monotone,
                           lattice=lattice)


def identity_functions(n):
    return tuple(ClampedAffine() for _ in range(n))


def bounded_identity_network(w, shock, lower, upper):
    """Clamped-identity network ``x = min(max(xW + eps, lower), upper)``."""
    w = as_matrix(w)
    n = w.shape[0]
    lo = as_vector(lower, n, "lower")
    hi = as_vector(upper, n, "upper")
    functions = tuple(ClampedAffine(0.0, 1.0, float(l), float(u))
                      for l, u in zip(lo, hi))
    return Network(w=w, functions=functions, shock=as_vector(shock, n, "shock"))


# ---------------------------------------------------------------------------
# Model families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InputOutput:
    """Gross-output accounting ``x = eps + xW`` with final demand ``eps``."""

    w: object
    final_demand: object


@dataclass(frozen=True)
class Production:
    """Log-output production network ``x_j = (1-a)((xW)_j + eps_j)``.

    ``w`` holds intermediate-input shares with unit column sums; pass either
    ``log_productivity`` (positive shocks ``z``, converted through the
    structural constants) or ``shock`` directly.
    """

    alpha: float
    w: object
    log_productivity: object = None
    shock: object = None


@dataclass(frozen=True)
class SimpleGame:
    """Linear-quadratic game on adjacency ``g``: best reply
    ``x_j = phi * ((xG)_j + alpha_j / phi)``."""

    phi: float
    g: object
    alpha: object


@dataclass(frozen=True)
class GlobalLocalGame:
    """Game with global substitutability and local complementarity."""

    eta: float
    gamma: float
    phi: float
    g: object
    alpha: object


@dataclass(frozen=True)
class InterbankGame:
    """Lending game: ``w = G - J``, ``eps_j = (theta - c0_j) / phi_j``,
    heterogeneous gains ``phi_j``."""

    theta: float
    c0: object
    phi: object
    g: object


@dataclass(frozen=True)
class CrossHoldings:
    """Book-value network ``x = eps + xW`` with ``eps = prices @ holdings``."""

    w: object
    prices: object
    holdings: object


@dataclass(frozen=True)
class EisenbergNoe:
    """Clearing payments from a nominal liability matrix and cash ``>= 0``."""

    liabilities: object
    cash: object


@dataclass(frozen=True)
class GeneralizedEN:
    """Clearing with possibly negative shocks: ``x = clamp(xW + eps, 0, pbar)``."""

    w: object
    pbar: object
    shock: object


@dataclass(frozen=True)
class BankruptcyCost:
    """Clearing with default costs: ``f_j(t) = clamp((1+a_j) t - a_j pbar_j, 0, pbar_j)``."""

    w: object
    alpha: object
    pbar: object
    shock: object


@dataclass(frozen=True)
class RogersVeraartNet:
    """Discontinuous recovery-rate clearing; equilibria may not be unique."""

    w: object
    alpha: float
    beta: float
    pbar: object
    shock: object


@dataclass(frozen=True)
class MaturityEN:
    """Clearing with equity insolvency and illiquidity; ``remainder`` is the
    net remaining/other-assets vector ``B``."""

    w: object
    pbar: object
    remainder: object
    shock: object


def _require(cond, field, why):
    if not cond:
        raise InvalidParameter(field, why)


def _nonneg_matrix(w, field="w"):
    m = as_matrix(w)
    _require(bool(np.all(m >= 0)), field, "entries must be nonnegative")
    return m


def _adjacency_matrix(g):
    m = _nonneg_matrix(g, "g")
    _require(bool(np.all(np.diag(m) == 0)), "g", "diagonal must be zero")
    return m


def build_network(spec):
    """Map a model family into its ``(f, W, eps)`` network."""
    if isinstance(spec, InputOutput):
        w = _nonneg_matrix(spec.w)
        eps = as_vector(spec.final_demand, w.shape[0], "final_demand")
        return Network(w=w, functions=identity_functions(w.shape[0]), shock=eps)

    if isinstance(spec, Production):
        w = _nonneg_matrix(spec.w)
        n = w.shape[0]
        _require(0.0 < spec.alpha < 1.0, "alpha", "must lie in (0, 1)")
        col = w.sum(axis=0)
        _require(bool(np.all(np.abs(col - 1.0) <= 1e-9)), "w",
                 "columns must sum to one")
        if spec.shock is not None:
            eps = as_vector(spec.shock, n, "shock")
        else:
            _require(spec.log_productivity is not None, "log_productivity",
                     "either shock or log_productivity is required")
            z = as_vector(spec.log_productivity, n, "log_productivity")
            _require(bool(np.all(z > 0)), "log_productivity", "must be positive")
            eps = _production_shock(spec.alpha, w, z)
        gain = 1.0 - spec.alpha
        functions = tuple(ClampedAffine(0.0, gain) for _ in range(n))
        return Network(w=w, functions=functions, shock=eps)

    if isinstance(spec, SimpleGame):
        g = _adjacency_matrix(spec.g)
        n = g.shape[0]
        _require(spec.phi > 0, "phi", "must be positive")
        alpha = as_vector(spec.alpha, n, "alpha")
        _require(bool(np.all(alpha > 0)), "alpha", "must be positive")
        functions = tuple(ClampedAffine(0.0, spec.phi) for _ in range(n))
        return Network(w=g, functions=functions, shock=alpha / spec.phi)

    if isinstance(spec, GlobalLocalGame):
        g = _adjacency_matrix(spec.g)
        n = g.shape[0]
        _require(spec.eta > 0, "eta", "must be positive")
        _require(spec.phi > 0, "phi", "must be positive")
        _require(spec.gamma >= 0, "gamma", "must be nonnegative")
        alpha = as_vector(spec.alpha, n, "alpha")
        _require(bool(np.all(alpha > 0)), "alpha", "must be positive")
        # w_ij = g_ij - gamma/phi on every entry, the own-total term included.
        w = g - (spec.gamma / spec.phi) * np.ones((n, n))
        functions = tuple(ClampedAffine(0.0, spec.phi / spec.eta) for _ in range(n))
        return Network(w=w, functions=functions, shock=alpha / spec.phi)

    if isinstance(spec, InterbankGame):
        g = _adjacency_matrix(spec.g)
        n = g.shape[0]
        _require(spec.theta > 0, "theta", "must be positive")
        c0 = as_vector(spec.c0, n, "c0")
        phi = as_vector(spec.phi, n, "phi")
        _require(bool(np.all(c0 > 0)), "c0", "must be positive")
        _require(bool(np.all(phi > 0)), "phi", "must be positive")
        w = g - np.ones((n, n))
        functions = tuple(ClampedAffine(0.0, float(p)) for p in phi)
        return Network(w=w, functions=functions, shock=(spec.theta - c0) / phi)

    if isinstance(spec, CrossHoldings):
        w = _nonneg_matrix(spec.w)
        n = w.shape[0]
        _require(bool(np.all(np.diag(w) == 0)), "w", "diagonal must be zero")
        _require(bool(np.all(w.sum(axis=1) < 1.0)), "w",
                 "external investors must hold a positive share (row sums < 1)")
        holdings = np.asarray(spec.holdings, dtype=float)
        _require(holdings.ndim == 2 and holdings.shape[1] == n, "holdings",
                 f"must be (assets x {n})")
        _require(bool(np.all(holdings >= 0)), "holdings", "must be nonnegative")
        prices = as_vector(spec.prices, holdings.shape[0], "prices")
        _require(bool(np.all(prices >= 0)), "prices", "must be nonnegative")
        return Network(w=w, functions=identity_functions(n), shock=prices @ holdings)

    if isinstance(spec, EisenbergNoe):
        liab = _nonneg_matrix(spec.liabilities, "liabilities")
        n = liab.shape[0]
        _require(bool(np.all(np.diag(liab) == 0)), "liabilities",
                 "diagonal must be zero")
        cash = as_vector(spec.cash, n, "cash")
        _require(bool(np.all(cash >= 0)), "cash", "must be nonnegative")
        pbar = liab.sum(axis=1)
        w = np.zeros((n, n))
        positive = pbar > 0
        w[positive] = liab[positive] / pbar[positive, None]
        functions = tuple(
            ClampedAffine(0.0, 1.0, 0.0, float(p)) if p > 0
            # a bank with no liabilities always pays zero
            else ClampedAffine(0.0, 0.0)
            for p in pbar
        )
        return Network(w=w, functions=functions, shock=cash)

    if isinstance(spec, GeneralizedEN):
        w = _nonneg_matrix(spec.w)
        n = w.shape[0]
        pbar = as_vector(spec.pbar, n, "pbar")
        _require(bool(np.all(pbar > 0)), "pbar", "must be positive")
        eps = as_vector(spec.shock, n, "shock")
        functions = tuple(ClampedAffine(0.0, 1.0, 0.0, float(p)) for p in pbar)
        return Network(w=w, functions=functions, shock=eps)

    if isinstance(spec, BankruptcyCost):
        w = _nonneg_matrix(spec.w)
        n = w.shape[0]
        alpha = as_vector(spec.alpha, n, "alpha")
        _require(bool(np.all(alpha >= 0)), "alpha", "must be nonnegative")
        pbar = as_vector(spec.pbar, n, "pbar")
        _require(bool(np.all(pbar > 0)), "pbar", "must be positive")
        eps = as_vector(spec.shock, n, "shock")
        functions = tuple(
            ClampedAffine(-float(a * p), 1.0 + float(a), 0.0, float(p))
            for a, p in zip(alpha, pbar)
        )
        return Network(w=w, functions=functions, shock=eps)

    if isinstance(spec, RogersVeraartNet):
        w = _nonneg_matrix(spec.w)
        n = w.shape[0]
        _require(0.0 < spec.alpha < 1.0, "alpha", "must lie in (0, 1)")
        _require(0.0 < spec.beta < 1.0, "beta", "must lie in (0, 1)")
        pbar = as_vector(spec.pbar, n, "pbar")
        _require(bool(np.all(pbar > 0)), "pbar", "must be positive")
        eps = as_vector(spec.shock, n, "shock")
        _require(bool(np.all(eps >= 0)), "shock", "must be nonnegative")
        q = pbar + (spec.alpha / spec.beta - 1.0) * eps
        e = spec.alpha * eps / spec.beta
        functions = tuple(RogersVeraart(spec.beta, float(qj), float(pj))
                          for qj, pj in zip(q, pbar))
        return Network(w=w, functions=functions, shock=e)

    if isinstance(spec, MaturityEN):
        w = _nonneg_matrix(spec.w)
        n = w.shape[0]
        _require(bool(np.all(w.sum(axis=1) <= 1.0 + 1e-12)), "w",
                 "rows must be substochastic")
        pbar = as_vector(spec.pbar, n, "pbar")
        _require(bool(np.all(pbar > 0)), "pbar", "must be positive")
        rem = as_vector(spec.remainder, n, "remainder")
        eps = as_vector(spec.shock, n, "shock")
        functions = tuple(
            ClampedAffine(min(float(b), 0.0), 1.0, 0.0, float(p))
            for b, p in zip(rem, pbar)
        )
        return Network(w=w, functions=functions, shock=eps)

    raise InvalidParameter("spec", f"unknown model family {type(spec).__name__}")


def _production_shock(alpha, w, z):
    """Structural shock ``eps_j = (mu_j + alpha log z_j) / (1 - alpha)``."""
    n = w.shape[0]
    gain = 1.0 - alpha
    b = linear_solve(np.eye(n) - gain * w.T, np.ones(n))
    logs = np.zeros((n, n))
    mask = w > 0
    logs[mask] = np.log(w[mask] / np.broadcast_to(b[:, None], w.shape)[mask])
    mu = (np.log(b * (alpha / n) ** alpha * gain ** gain)
          + gain * (w * logs).sum(axis=0))
    return (mu + alpha * np.log(z)) / gain


def closed_form_equilibrium(spec):
    """The linear closed form for the invertible families; ``None`` for the
    clamped or otherwise nonlinear ones."""
    if isinstance(spec, InputOutput):
        net = build_network(spec)
        _check_convergent(spec.w, 1.0)
        return linear_solve(np.eye(net.n) - net.w, net.shock)

    if isinstance(spec, Production):
        net = build_network(spec)
        gain = 1.0 - spec.alpha
        _check_convergent(net.w, gain)
        return linear_solve(np.eye(net.n) - gain * net.w, gain * net.shock)

    if isinstance(spec, SimpleGame):
        net = build_network(spec)
        _check_convergent(net.w, spec.phi)
        return linear_solve(np.eye(net.n) - spec.phi * net.w,
                            spec.phi * net.shock)

    if isinstance(spec, GlobalLocalGame):
        net = build_network(spec)
        gain = spec.phi / spec.eta
        try:
            return linear_solve(np.eye(net.n) - gain * net.w, gain * net.shock)
        except Exception as exc:
            raise NotInvertible(f"equilibrium system is singular: {exc}") from exc

    if isinstance(spec, CrossHoldings):
        net = build_network(spec)
        _check_convergent(net.w, 1.0)
        return linear_solve(np.eye(net.n) - net.w, net.shock)

    return None


def _check_convergent(w, gain):
    r = gain * spectral_radius(np.abs(as_matrix(w)))
    if r >= 1.0 - SPECTRAL_TOL:
        raise NotInvertible(
            f"spectral condition violated: gain * r(|W|) = {r:.6g} >= 1")
