"""Independent brute-force verification.

Exhaustive boundary-pattern enumeration finds every equilibrium of a
bounded-identity network by trying all 3^n upper/lower/interior patterns;
grid search is the fallback oracle for small discontinuous systems; the
multiplicity-rate estimator samples shocks from a fixed, documented 64-bit
generator so rates are bit-reproducible.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import PreconditionViolated, TooLarge
from .netmodel import ClampedAffine, Network

INTERIOR = "interior"
LOWER = "lower"
UPPER = "upper"
_TAGS = (INTERIOR, LOWER, UPPER)

#: 3^12 patterns, each at most a 12x12 solve, stays under a minute.
ENUMERATION_LIMIT = 12
GRID_LIMIT = 3
#: Two isolated equilibria closer than this are merged.
DEDUP_TOL = 1e-8

_MASK64 = (1 << 64) - 1


def _splitmix64(z):
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class Xorshift64Star:
    """Deterministic 64-bit xorshift* generator.

    The state is one splitmix64 step of the seed (zero maps to the splitmix
    constant); each draw applies the 12/25/27 xorshift triple and multiplies
    by 0x2545F4914F6CDD1D; uniforms take the top 53 bits.  The algorithm is
    fixed so that seeded runs reproduce bit for bit everywhere.
    """

    def __init__(self, seed):
        state = _splitmix64(int(seed) & _MASK64)
        self.state = state if state else 0x9E3779B97F4A7C15

    def next_u64(self):
        x = self.state
        x ^= x >> 12
        x = (x ^ (x << 25)) & _MASK64
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & _MASK64

    def uniform(self):
        """Uniform float in [0, 1) with 53-bit resolution."""
        return (self.next_u64() >> 11) * 2.0 ** -53


@dataclass(frozen=True)
class ContinuousUniform:
    """Componentwise uniform shocks over the box ``[lower, upper]``."""

    lower: tuple
    upper: tuple

    def draw(self, rng, n):
        lo = np.asarray(self.lower, dtype=float)
        hi = np.asarray(self.upper, dtype=float)
        if lo.shape != (n,) or hi.shape != (n,):
            raise PreconditionViolated(f"sampler box must have length {n}")
        return lo + np.array([rng.uniform() for _ in range(n)]) * (hi - lo)


@dataclass(frozen=True)
class DiscreteUniform:
    """Equal-weight draws from a finite support of shock vectors."""

    support: tuple

    def draw(self, rng, n):
        k = len(self.support)
        idx = min(int(rng.uniform() * k), k - 1)
        point = np.asarray(self.support[idx], dtype=float)
        if point.shape != (n,):
            raise PreconditionViolated(f"support points must have length {n}")
        return point


@dataclass(frozen=True)
class Family:
    """One connected piece of a solution family.

    Members are ``base + t * basis[0]`` for ``t`` in the closed ``box`` when
    the degeneracy is one-dimensional; higher-dimensional null spaces are
    reported with the full ``basis`` and ``box=None`` (unexplored).
    """

    pattern: tuple
    base: np.ndarray
    basis: tuple
    box: object


@dataclass(frozen=True)
class EquilibriumSet:
    points: tuple
    patterns: tuple
    families: tuple

    def count(self):
        return len(self.points), len(self.families)


def _decode(code, n):
    return tuple(_TAGS[(code // 3 ** k) % 3] for k in range(n))


def _identity_profile(net):
    prof = net.clamped_profile()
    if prof is None:
        raise PreconditionViolated("oracle enumeration needs clamped-affine "
                                   "interaction functions")
    off, gain, lo, hi = prof
    if np.any(off != 0.0) or np.any(gain != 1.0):
        raise PreconditionViolated("oracle enumeration needs zero offsets "
                                   "and unit gains")
    if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
        raise PreconditionViolated("oracle enumeration needs finite bounds")
    return lo, hi


def _family_from_pattern(net, code, lo, hi, tol):
    """Analyse a singular pattern; returns a Family or None."""
    n = net.n
    w = net.w
    tags = _decode(code, n)
    interior = [j for j, t in enumerate(tags) if t == INTERIOR]
    if not interior:
        return None
    v = np.array([lo[j] if t == LOWER else hi[j] if t == UPPER else 0.0
                  for j, t in enumerate(tags)])
    c = (v @ w + net.shock)[interior]
    a = np.eye(len(interior)) - w[np.ix_(interior, interior)]
    sol, *_ = np.linalg.lstsq(a.T, c, rcond=None)
    if np.max(np.abs(sol @ a - c)) > tol * (1.0 + np.max(np.abs(c))):
        return None  # singular but inconsistent: no solution at all
    svals = np.linalg.svd(a.T, compute_uv=False)
    rank = int(np.sum(svals > max(svals[0] * 1e-12, 1e-300)))
    _, _, vh = np.linalg.svd(a.T)
    null = vh[rank:]
    if null.shape[0] == 0:
        return None
    basis = []
    for row in null:
        d = np.zeros(n)
        d[interior] = row
        lead = np.nonzero(np.abs(d) > 1e-12)[0]
        if len(lead) and d[lead[0]] < 0:
            d = -d
        basis.append(d)
    base = v.copy()
    base[interior] = sol
    if len(basis) > 1:
        return Family(pattern=tags, base=base, basis=tuple(basis), box=None)
    d = basis[0]
    # Admissible t: interior coordinates stay inside their closed clamp
    # ranges and saturated agents keep their input on the saturated side.
    t_lo, t_hi = -np.inf, np.inf
    for j in interior:
        if d[j] > 1e-15:
            t_lo = max(t_lo, (lo[j] - base[j]) / d[j])
            t_hi = min(t_hi, (hi[j] - base[j]) / d[j])
        elif d[j] < -1e-15:
            t_lo = max(t_lo, (hi[j] - base[j]) / d[j])
            t_hi = min(t_hi, (lo[j] - base[j]) / d[j])
        else:
            if base[j] < lo[j] or base[j] > hi[j]:
                return None
    s0 = base @ w + net.shock
    g = d @ w
    for j, tag in enumerate(tags):
        if tag == INTERIOR or abs(g[j]) <= 1e-15:
            if tag == UPPER and s0[j] < hi[j] - tol:
                return None
            if tag == LOWER and s0[j] > lo[j] + tol:
                return None
            continue
        if tag == UPPER:
            bound = (hi[j] - s0[j]) / g[j]
            if g[j] > 0:
                t_lo = max(t_lo, bound)
            else:
                t_hi = min(t_hi, bound)
        else:
            bound = (lo[j] - s0[j]) / g[j]
            if g[j] > 0:
                t_hi = min(t_hi, bound)
            else:
                t_lo = max(t_lo, bound)
    if not (np.isfinite(t_lo) and np.isfinite(t_hi)) or t_hi - t_lo <= 1e-12:
        return None
    mid = 0.5 * (t_lo + t_hi)
    base = base + mid * d
    return Family(pattern=tags, base=base, basis=(d,),
                  box=(t_lo - mid, t_hi - mid))


def _distance_to_family(p, family):
    if family.box is not None:
        d = family.basis[0]
        t = float((p - family.base) @ d) / float(d @ d)
        t = min(max(t, family.box[0]), family.box[1])
        return float(np.max(np.abs(p - family.base - t * d)))
    basis = np.stack(family.basis)
    coeff, *_ = np.linalg.lstsq(basis.T, p - family.base, rcond=None)
    return float(np.max(np.abs(p - family.base - coeff @ basis)))


def enumerate_equilibria(net, tol=1e-9):
    """All equilibria of a bounded-identity network (n <= 12).

    Every agent of every equilibrium is at its upper bound, at its lower
    bound, or strictly interior; the scan fixes each of the 3^n patterns,
    solves the interior linear block, keeps the consistent solutions, and
    turns consistent singular blocks into solution families.
    """
    lo, hi = _identity_profile(net)
    if net.n > ENUMERATION_LIMIT:
        raise TooLarge(net.n, ENUMERATION_LIMIT)
    raw_points, raw_codes, singular = kernels.pattern_scan(
        net.w, net.shock, lo, hi, tol)
    families = []
    for code in singular:
        fam = _family_from_pattern(net, code, lo, hi, tol)
        if fam is not None:
            families.append(fam)
    families.sort(key=lambda f: tuple(f.base))
    points = []
    patterns = []
    for x, code in sorted(zip(raw_points, raw_codes),
                          key=lambda item: tuple(item[0])):
        if net.residual(x) > tol:
            continue
        if any(np.max(np.abs(x - q)) <= DEDUP_TOL for q in points):
            continue
        if any(_distance_to_family(x, f) <= DEDUP_TOL for f in families):
            continue
        points.append(x)
        patterns.append(_decode(code, net.n))
    return EquilibriumSet(points=tuple(points), patterns=tuple(patterns),
                          families=tuple(families))


def _apply_columns(net, pts):
    """Vectorised T over a stack of states (rows of ``pts``)."""
    z = pts @ net.w + net.shock
    out = np.empty_like(z)
    for j, f in enumerate(net.functions):
        col = z[:, j]
        if isinstance(f, ClampedAffine):
            out[:, j] = np.clip(f.offset + f.gain * col, f.lower, f.upper)
        else:
            out[:, j] = np.where(col < f.threshold, f.beta * col, f.cap)
    return out


def grid_search(net, box, resolution, tol=1e-9):
    """Residual grid scan with a short damped refinement (n <= 3).

    The fallback oracle for discontinuous or cost-amplified clearing systems
    where the boundary-pattern enumeration does not apply; results are
    heuristic, not certified.
    """
    if net.n > GRID_LIMIT:
        raise TooLarge(net.n, GRID_LIMIT)
    if resolution < 2:
        raise PreconditionViolated("resolution must be at least 2")
    lo = np.asarray(box[0], dtype=float)
    hi = np.asarray(box[1], dtype=float)
    axes = [np.linspace(lo[d], hi[d], resolution) for d in range(net.n)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    res = np.max(np.abs(pts - _apply_columns(net, pts)), axis=1)
    shape = (resolution,) * net.n
    grid = res.reshape(shape)
    minima = np.ones(shape, dtype=bool)
    for axis in range(net.n):
        lower = np.roll(grid, 1, axis=axis)
        upper = np.roll(grid, -1, axis=axis)
        head = [slice(None)] * net.n
        tail = [slice(None)] * net.n
        head[axis] = 0
        tail[axis] = -1
        lower[tuple(head)] = np.inf
        upper[tuple(tail)] = np.inf
        minima &= (grid <= lower) & (grid <= upper)
    found = []
    for x in pts[minima.ravel()]:
        x = x.copy()
        for _ in range(500):
            step = net.apply(x) - x
            if np.max(np.abs(step)) <= 0.1 * tol:
                break
            # refinement is confined to the search box
            x = np.clip(x + 0.5 * step, lo, hi)
        if net.residual(x) <= tol:
            if not any(np.max(np.abs(x - q)) <= DEDUP_TOL for q in found):
                found.append(x)
    return sorted(found, key=tuple)


def multiplicity_rate(net_template, sampler, trials, seed):
    """Fraction of sampled shocks whose equilibrium set is not a single
    point.  Draws are consumed sequentially from the seeded generator, one
    shock vector per trial, so runs are reproducible."""
    if trials <= 0:
        raise PreconditionViolated("trials must be positive")
    _identity_profile(net_template)
    if net_template.n > ENUMERATION_LIMIT:
        raise TooLarge(net_template.n, ENUMERATION_LIMIT)
    rng = Xorshift64Star(seed)
    hits = 0
    for _ in range(trials):
        eps = sampler.draw(rng, net_template.n)
        net = Network(w=net_template.w, functions=net_template.functions,
                      shock=eps)
        found = enumerate_equilibria(net)
        if found.families or len(found.points) > 1:
            hits += 1
    return hits / trials
