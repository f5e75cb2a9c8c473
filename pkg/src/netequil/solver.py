"""Equilibrium computation and uniqueness certification.

Solvers: damped-free fixed-point iteration under the contraction certificate
(with the spectral error bound), monotone lattice iteration from either
bound, and the finite fictitious-default search for bounded-identity
networks.  Certification: contraction / weakly-chained / acyclic /
positive-cash uniqueness certificates, a multiplicity prober that constructs
a verified second equilibrium along the left Perron direction of a critical
strongly connected block, and the optimality check for the programming
characterisation of clearing vectors.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    MaxIterations,
    NoEquilibriumFound,
    NoLattice,
    NotContracting,
    NotMonotone,
    PreconditionViolated,
    ResidualTooLarge,
    Singular,
    UnhandledSingularity,
)
from .matgraph import (
    LEFT,
    RIGHT,
    ROW,
    COLUMN,
    SPECTRAL_TOL,
    ChainWitness,
    as_matrix,
    as_vector,
    contraction_modulus,
    is_acyclic,
    linear_solve,
    perron_vector,
    scc_condensation,
    spectral_radius,
    weakly_chained_check,
)
from .netmodel import ClampedAffine, RogersVeraart, network_metadata

BANACH = "banach"
TARSKI_ABOVE = "tarski_above"
TARSKI_BELOW = "tarski_below"
ALGORITHM1 = "algorithm1"

ABOVE = "above"
BELOW = "below"


# ---------------------------------------------------------------------------
# Certificates and reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Contraction:
    """``r(|W| diag(beta)) = modulus < 1``: unique, globally stable."""

    modulus: float
    kind = "contraction"


@dataclass(frozen=True)
class WeaklyChained:
    """Non-expansive functions over a weakly chained substochastic matrix."""

    witness: ChainWitness
    kind = "weakly_chained"


@dataclass(frozen=True)
class Acyclic:
    kind = "acyclic"


@dataclass(frozen=True)
class ENPositiveCash:
    """Clearing system with row-stochastic W and nonnegative cash, some of
    it strictly positive."""

    kind = "en_positive_cash"


@dataclass(frozen=True)
class NoneFound:
    kind = "none"


@dataclass(frozen=True)
class Classification:
    contracting: bool
    modulus: object
    noncontracting: bool
    neither: bool


@dataclass(frozen=True)
class SolveReport:
    x: np.ndarray
    residual: float
    method: str
    iterations: int
    certificate: object
    outer_guesses: object = None   # fictitious-default search only
    error_bound: object = None     # contraction iteration only


@dataclass(frozen=True)
class Unique:
    """Probe outcome: no critical block supports a solution family."""


@dataclass(frozen=True)
class MultiplicityCertificate:
    """A verified one-parameter family of equilibria.

    ``x_star + t * direction`` is an equilibrium for every ``t`` in
    ``t_range``; ``direction`` is the left Perron vector of the critical
    strongly connected block ``scc`` (unit sum, zero off the block).
    ``affected`` lists the vertices reachable from the block, whose values
    co-move in the wider solution family without being parametrised here.
    """

    scc: tuple
    direction: np.ndarray
    t_range: tuple
    witness: np.ndarray
    witness_residual: float
    affected: tuple


@dataclass(frozen=True)
class Solvable:
    x: np.ndarray


@dataclass(frozen=True)
class Unsolvable:
    pass


@dataclass(frozen=True)
class Underdetermined:
    direction: np.ndarray


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

def classify(net):
    """Contracting / noncontracting flags (both may be false, e.g. for
    discontinuous interaction functions)."""
    meta = network_metadata(net)
    contracting = False
    modulus = None
    if meta.beta is not None:
        modulus = contraction_modulus(net.w, meta.beta)
        contracting = modulus < 1.0 - SPECTRAL_TOL
    noncontracting = False
    if (meta.beta is not None and bool(np.all(meta.beta <= 1.0))
            and meta.monotone and meta.bounded and bool(np.all(net.w >= 0))):
        noncontracting = abs(spectral_radius(net.w) - 1.0) <= SPECTRAL_TOL
    return Classification(contracting=contracting, modulus=modulus,
                          noncontracting=noncontracting,
                          neither=not (contracting or noncontracting))


def _iterate(net, x0, tol, kmax):
    """Fixed-point iteration x <- T x; returns ``(x, diff, iters)`` with
    ``residual(x) == diff`` for the returned pre-image ``x``."""
    prof = net.clamped_profile()
    if prof is not None:
        off, gain, lo, hi = prof
        return kernels.clamp_iterate(net.w, net.shock, off, gain, lo, hi,
                                     x0, tol, kmax)
    x = np.array(x0, dtype=float)
    diff = np.inf
    for k in range(1, kmax + 1):
        y = net.apply(x)
        diff = float(np.max(np.abs(y - x)))
        if diff <= tol:
            return x, diff, k
        x = y
    return x, diff, kmax


# ---------------------------------------------------------------------------
# Solvers
# ---------------------------------------------------------------------------

def solve_banach(net, x0=None, tol=1e-9, kmax=100000):
    """Globally stable iteration ``x <- f(xW + eps)`` for contracting nets.

    The report carries ``error_bound = ||(|W| diag(beta))^k||_inf *
    ||T x0 - x0||_inf`` at the final ``k``.
    """
    cls = classify(net)
    if not cls.contracting:
        raise NotContracting(
            f"contraction modulus {cls.modulus} is not below one")
    x0 = np.zeros(net.n) if x0 is None else as_vector(x0, net.n, "x0")
    d0 = float(np.max(np.abs(net.apply(x0) - x0)))
    # iterate to half the tolerance so the reported (re-evaluated) residual
    # stays within the requested one
    x, diff, iters = _iterate(net, x0, 0.5 * tol, kmax)
    if diff > tol:
        raise MaxIterations(kmax)
    beta = network_metadata(net).beta
    a = np.abs(net.w) * beta[None, :]
    # operator norm induced by the row-vector action x -> xA on max-norm
    # vectors, i.e. the maximum column sum
    bound = float(np.abs(np.linalg.matrix_power(a, iters)).sum(axis=0).max()) * d0
    return SolveReport(x=x, residual=net.residual(x), method=BANACH,
                       iterations=iters, certificate=Contraction(cls.modulus),
                       error_bound=bound)


def _default_lattice(net):
    meta = network_metadata(net)
    if meta.lattice is not None:
        return meta.lattice
    # Rogers-Veraart carries no intrinsic lattice; with nonnegative shock
    # and matrix, [0, max(beta q, cap)] is a self-mapped order interval.
    if (all(isinstance(f, RogersVeraart) for f in net.functions)
            and bool(np.all(net.shock >= 0)) and bool(np.all(net.w >= 0))):
        hi = np.array([f.bounds()[1] for f in net.functions])
        return np.zeros(net.n), hi
    return None


def solve_tarski(net, direction, tol=1e-9, kmax=5000000, bounds=None):
    """Monotone iteration from a lattice bound.

    ``direction=ABOVE`` starts at the upper bound and decreases to the
    greatest equilibrium; ``BELOW`` increases from the lower bound to the
    least.  For discontinuous (Rogers-Veraart) functions only ABOVE is
    offered and the output is the greatest fixed-point candidate, accepted
    through the final residual check.
    """
    if direction not in (ABOVE, BELOW):
        raise PreconditionViolated(f"direction must be {ABOVE!r} or {BELOW!r}")
    meta = network_metadata(net)
    if not meta.monotone:
        raise NotMonotone("every interaction function must be monotone")
    if bounds is None:
        bounds = _default_lattice(net)
        if bounds is None:
            raise NoLattice("no intrinsic lattice bounds; pass bounds=(lo, hi)")
    lo = as_vector(bounds[0], net.n, "lower bound")
    hi = as_vector(bounds[1], net.n, "upper bound")
    discontinuous = any(isinstance(f, RogersVeraart) for f in net.functions)
    if discontinuous and direction == BELOW:
        raise NoLattice("iteration from below needs continuity from below; "
                        "only ABOVE is offered for discontinuous functions")
    start = hi if direction == ABOVE else lo
    x, diff, iters = _iterate(net, start, 0.5 * tol, kmax)
    if diff > tol:
        raise MaxIterations(kmax)
    method = TARSKI_ABOVE if direction == ABOVE else TARSKI_BELOW
    return SolveReport(x=x, residual=net.residual(x), method=method,
                       iterations=iters, certificate=uniqueness_certificate(net))


def _bounded_identity_profile(net):
    """(lo, hi) when every function is clamp(t, lo, hi) with unit gain and
    zero offset and finite bounds; None otherwise."""
    prof = net.clamped_profile()
    if prof is None:
        return None
    off, gain, lo, hi = prof
    if np.any(off != 0.0) or np.any(gain != 1.0):
        return None
    if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
        return None
    return lo, hi


def _stochastic(w):
    rows = np.abs(w.sum(axis=1) - 1.0).max() <= SPECTRAL_TOL
    cols = np.abs(w.sum(axis=0) - 1.0).max() <= SPECTRAL_TOL
    return rows or cols


def algorithm1_eligible(net):
    """True iff the net satisfies the fictitious-default preconditions."""
    if _bounded_identity_profile(net) is None:
        return False
    return bool(np.all(net.w >= 0)) and _stochastic(net.w)


def solve_algorithm1(net, tol=1e-9):
    """Finite fictitious-default search for bounded-identity networks.

    Enumerates candidate lower-bound sets from the power set of ``B(l)`` by
    decreasing cardinality (lexicographic within a size, so the full set is
    tried first), runs the inner fictitious-default loop on each guess, skips
    a guess whose linear system turns singular, and accepts an iterate only
    after the full residual check.  Inner iterations total at most
    ``n 2^(n-1)``.
    """
    ident = _bounded_identity_profile(net)
    if ident is None:
        raise PreconditionViolated(
            "requires bounded identity interaction functions "
            "(zero offset, unit gain, finite bounds)")
    lo, hi = ident
    w = net.w
    if np.any(w < 0) or not _stochastic(w):
        raise PreconditionViolated("W must be nonnegative and row- or "
                                   "column-stochastic")
    n = net.n
    eps = net.shock
    cert = uniqueness_certificate(net)

    def upper_set(x):
        return frozenset(np.nonzero(x @ w + eps >= hi)[0])

    def lower_set(x):
        return frozenset(np.nonzero(x @ w + eps <= lo)[0])

    everyone = frozenset(range(n))
    if upper_set(hi) == everyone:
        return SolveReport(x=hi.copy(), residual=net.residual(hi),
                           method=ALGORITHM1, iterations=0,
                           certificate=cert, outer_guesses=0)
    if lower_set(lo) == everyone:
        return SolveReport(x=lo.copy(), residual=net.residual(lo),
                           method=ALGORITHM1, iterations=0,
                           certificate=cert, outer_guesses=0)

    b_floor = sorted(lower_set(lo))
    inner_total = 0
    guesses = 0
    for size in range(len(b_floor), -1, -1):
        for combo in itertools.combinations(b_floor, size):
            guesses += 1
            fixed_low = frozenset(combo)
            x = hi.copy()
            for j in fixed_low:
                x[j] = lo[j]
            fixed_high = upper_set(x) - fixed_low
            for _ in range(n):
                free = sorted(everyone - fixed_high - fixed_low)
                v = np.zeros(n)
                for j in fixed_high:
                    v[j] = hi[j]
                for j in fixed_low:
                    v[j] = lo[j]
                rhs = (v @ w + eps)[free]
                block = np.eye(len(free)) - w[np.ix_(free, free)]
                try:
                    sol = linear_solve(block, rhs)
                except Singular:
                    break
                inner_total += 1
                x = v.copy()
                x[free] = sol
                updated = upper_set(x) - fixed_low
                if updated == fixed_high:
                    break
                fixed_high = updated
            residual = net.residual(x)
            if residual <= tol:
                return SolveReport(x=x, residual=residual,
                                   method=ALGORITHM1, iterations=inner_total,
                                   certificate=cert, outer_guesses=guesses)
    raise NoEquilibriumFound(
        f"all {guesses} guesses exhausted after {inner_total} inner "
        "iterations: multiplicity or numeric failure")


# ---------------------------------------------------------------------------
# Multiplicity probing
# ---------------------------------------------------------------------------

def _reachable_from(w, block0):
    """0-based vertices reachable from the 0-based ``block0``, excluding it."""
    seen = set(block0)
    queue = list(block0)
    while queue:
        v = queue.pop()
        for u in np.nonzero(w[v])[0]:
            if int(u) not in seen:
                seen.add(int(u))
                queue.append(int(u))
    return sorted(seen - set(block0))


def multiplicity_probe(net, x_star, tol=1e-9):
    """Search for a one-parameter family of equilibria through ``x_star``.

    A strongly connected block with spectral radius one supports the family
    ``x_star + t e`` (``e`` its left Perron vector) exactly when every block
    agent responds on the linear branch of its clamp, the closed interval of
    admissible ``t`` is computed from the clamp bounds of the block agents
    and from the saturation slack of their direct successors, and the
    certificate's witness is verified by residual.  Blocks whose interval
    degenerates to a point yield no certificate.
    """
    cls = classify(net)
    if not cls.noncontracting:
        raise PreconditionViolated("probe requires a noncontracting network")
    prof = net.clamped_profile()
    if prof is None or np.any(prof[1] != 1.0):
        raise PreconditionViolated("probe requires unit-gain clamped "
                                   "interaction functions")
    off, _, lo, hi = prof
    x_star = as_vector(x_star, net.n, "x_star")
    if net.residual(x_star) > tol:
        raise ResidualTooLarge(
            f"x_star residual {net.residual(x_star):.3g} exceeds {tol:.3g}")
    s = net.inputs(x_star)
    z = off + s  # response before clamping
    w = net.w
    for block in scc_condensation(w).blocks:
        block0 = [v - 1 for v in block]
        members = set(block0)
        ws = w[np.ix_(block0, block0)]
        if abs(spectral_radius(ws) - 1.0) > SPECTRAL_TOL:
            continue
        zb = z[block0]
        if np.any(zb < lo[block0] - tol) or np.any(zb > hi[block0] + tol):
            continue  # some block agent is saturated with slack
        _, e_block = perron_vector(ws, LEFT)
        e_hat = np.zeros(net.n)
        e_hat[block0] = e_block
        t_lo = float(np.max((lo[block0] - zb) / e_block))
        t_hi = float(np.min((hi[block0] - zb) / e_block))
        shift = e_hat @ w  # input change per unit t, block agents get e back
        degenerate = False
        for j in range(net.n):
            if j in members or shift[j] <= 0.0:
                continue
            if z[j] >= hi[j] - tol:
                t_lo = max(t_lo, (hi[j] - z[j]) / shift[j])
            elif z[j] <= lo[j] + tol:
                t_hi = min(t_hi, (lo[j] - z[j]) / shift[j])
            else:
                degenerate = True  # an interior successor pins t = 0
                break
        if degenerate or t_hi - t_lo <= tol:
            continue
        t_mid = 0.5 * (t_lo + t_hi)
        if abs(t_mid) <= tol:
            t_mid = 0.5 * (t_hi if t_hi > -t_lo else t_lo)
        witness = x_star + t_mid * e_hat
        witness_residual = net.residual(witness)
        if witness_residual > tol:
            continue
        affected = tuple(v + 1 for v in _reachable_from(w, block0))
        return MultiplicityCertificate(
            scc=tuple(int(v) for v in block), direction=e_hat,
            t_range=(float(t_lo), float(t_hi)), witness=witness,
            witness_residual=witness_residual, affected=affected)
    return Unique()


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------

def _en_shaped(net):
    prof = net.clamped_profile()
    if prof is None:
        return False
    off, gain, lo, hi = prof
    return (bool(np.all(off == 0.0)) and bool(np.all(gain == 1.0))
            and bool(np.all(lo == 0.0)) and bool(np.all(np.isfinite(hi)))
            and bool(np.all(hi > 0.0)))


def uniqueness_certificate(net):
    """First applicable uniqueness certificate, or ``NoneFound``."""
    meta = network_metadata(net)
    if meta.beta is not None:
        modulus = contraction_modulus(net.w, meta.beta)
        if modulus < 1.0 - SPECTRAL_TOL:
            return Contraction(modulus)
        if bool(np.all(meta.beta <= 1.0)) and bool(np.all(net.w >= 0)):
            for orientation in (ROW, COLUMN):
                outcome = weakly_chained_check(net.w, orientation)
                if isinstance(outcome, ChainWitness):
                    return WeaklyChained(outcome)
        if is_acyclic(net.w):
            return Acyclic()
    if (_en_shaped(net) and bool(np.all(net.w >= 0))
            and float(np.abs(net.w.sum(axis=1) - 1.0).max()) <= SPECTRAL_TOL
            and bool(np.all(net.shock >= 0)) and bool(np.any(net.shock > 0))):
        return ENPositiveCash()
    return NoneFound()


def verify_equilibrium(net, x):
    """Fixed-point residual ``max_j |x_j - f_j((xW + eps)_j)|``."""
    return net.residual(x)


def lp_verify(net, x, tol=1e-9):
    """Check the programming characterisation of a clearing vector.

    True iff ``x`` lies in ``[lo, hi]``, satisfies
    ``0 <= max(xW + eps - x, lo - x)`` componentwise, and is componentwise
    maximal: each coordinate sits at the cap or equals the clamped response.
    """
    ident = _bounded_identity_profile(net)
    if ident is None:
        raise PreconditionViolated("requires a bounded identity network")
    lo, hi = ident
    x = as_vector(x, net.n, "x")
    if np.any(x < lo - tol) or np.any(x > hi + tol):
        return False
    z = net.inputs(x)
    if np.any(np.maximum(z - x, lo - x) < -tol):
        return False
    clamped = np.clip(z, lo, hi)
    maximal = (x >= hi - tol) | (np.abs(x - clamped) <= tol)
    return bool(np.all(maximal))


def linear_system_solvability(w, eps, tol=1e-9):
    """Solvability trichotomy of the unbounded linear system ``x = xW + eps``.

    ``Solvable`` when ``I - W`` passes the pivot test; otherwise, for a
    nonnegative irreducible ``W`` with unit spectral radius, the system is
    ``Unsolvable`` unless ``eps`` is orthogonal to the right Perron vector,
    in which case it is ``Underdetermined`` along the left Perron direction.
    """
    w = as_matrix(w)
    eps = as_vector(eps, w.shape[0], "eps")
    try:
        x = linear_solve(np.eye(w.shape[0]) - w, eps)
        return Solvable(x)
    except Singular:
        pass
    if np.any(w < 0):
        raise UnhandledSingularity("singular I - W with mixed-sign W")
    if len(scc_condensation(w).blocks) != 1:
        raise UnhandledSingularity("singular I - W with reducible W")
    if abs(spectral_radius(w) - 1.0) > SPECTRAL_TOL:
        raise UnhandledSingularity("singular I - W without unit spectral radius")
    _, right = perron_vector(w, RIGHT)
    if abs(float(eps @ right)) > tol * (1.0 + float(np.abs(eps).max())):
        return Unsolvable()
    _, left = perron_vector(w, LEFT)
    return Underdetermined(direction=left)
