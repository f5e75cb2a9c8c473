"""Dense matrix arithmetic and the graph/spectral analyses behind the
uniqueness certificates: SCC condensation, acyclicity, weakly chained
substochasticity, spectral radii, Perron vectors, principal submatrices.

Conventions
-----------
* All vectors are row vectors; entry ``(i, j)`` of a sensitivity matrix is
  the influence of agent ``i`` on agent ``j``.
* An edge ``i -> j`` exists iff ``w_ij != 0`` exactly (input data is exact);
  spectral comparisons against one use ``SPECTRAL_TOL``.
* Vertex indices are 1-based in every returned witness or report; numpy
  storage stays 0-based internally.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import (
    DimensionMismatch,
    NoConvergence,
    NonNegativityViolated,
    NotIrreducible,
    RemoveAll,
    Singular,
)

#: Tolerance for spectral comparisons against one.
SPECTRAL_TOL = 1e-9
#: A row counts as deficient when its sum is below ``1 - DEFICIENCY_TOL``.
DEFICIENCY_TOL = 1e-12

IN_SUBGRAPH = "in_subgraph"
OUT_SUBGRAPH = "out_subgraph"

ROW = "row"
COLUMN = "column"
LEFT = "left"
RIGHT = "right"


def as_matrix(a):
    """Validate and return ``a`` as a square, finite, float64 array."""
    arr = np.asarray(a, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DimensionMismatch("matrix entries must be finite")
    return arr


def as_vector(b, n, name="vector"):
    arr = np.asarray(b, dtype=float)
    if arr.ndim != 1 or arr.shape[0] != n:
        raise DimensionMismatch(f"{name} must have length {n}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DimensionMismatch(f"{name} entries must be finite")
    return arr


@dataclass(frozen=True)
class Condensation:
    """SCC partition of a graph, blocks listed in topological order.

    ``blocks`` holds 1-based vertex tuples; ``kinds[k]`` tags ``blocks[k]``
    as :data:`IN_SUBGRAPH` (no edge leaves it) or :data:`OUT_SUBGRAPH`;
    ``topo_order`` indexes blocks consistently with inter-block edges, every
    out-subgraph before anything it reaches.
    """

    blocks: tuple
    kinds: tuple
    topo_order: tuple

    def block_of(self, vertex):
        """Index of the block containing the 1-based ``vertex``."""
        for k, block in enumerate(self.blocks):
            if vertex in block:
                return k
        raise KeyError(vertex)


@dataclass(frozen=True)
class ChainWitness:
    """Success certificate of :func:`weakly_chained_check`.

    ``chains`` maps each non-deficient vertex to a path (tuple of 1-based
    vertices) ending at a deficient vertex; every consecutive pair is an
    edge with strictly positive weight in the stated ``orientation``.
    """

    orientation: str
    deficient: tuple
    chains: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ChainFailure:
    """Failure tag of :func:`weakly_chained_check`.

    ``kind`` is ``"not_substochastic"`` (with the offending vertices) or
    ``"no_chain"`` (vertices with no path to any deficient vertex).
    """

    kind: str
    vertices: tuple


def _adjacency(a):
    """0-based adjacency lists under the exact zero-pattern rule."""
    n = a.shape[0]
    return [[int(j) for j in np.nonzero(a[i])[0]] for i in range(n)]


def _tarjan(adj, n):
    """Iterative Tarjan; components returned in reverse topological order."""
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack = []
    comps = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, ptr = work[-1]
            if ptr == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            descended = False
            neighbors = adj[v]
            for i in range(ptr, len(neighbors)):
                u = neighbors[i]
                if index[u] == -1:
                    work[-1] = (v, i + 1)
                    work.append((u, 0))
                    descended = True
                    break
                if on_stack[u]:
                    low[v] = min(low[v], index[u])
            if descended:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    u = stack.pop()
                    on_stack[u] = False
                    comp.append(u)
                    if u == v:
                        break
                comps.append(sorted(comp))
    return comps


def _blocks0(a):
    """0-based SCC blocks of ``graph a`` in topological (sources-first) order."""
    comps = _tarjan(_adjacency(a), a.shape[0])
    comps.reverse()
    return comps


def scc_condensation(w):
    """Tarjan-style SCC partition with in/out-subgraph tags."""
    a = as_matrix(w)
    blocks0 = _blocks0(a)
    member = {}
    for k, block in enumerate(blocks0):
        for v in block:
            member[v] = k
    kinds = []
    for k, block in enumerate(blocks0):
        outgoing = False
        for v in block:
            for u in np.nonzero(a[v])[0]:
                if member[u] != k:
                    outgoing = True
                    break
            if outgoing:
                break
        kinds.append(OUT_SUBGRAPH if outgoing else IN_SUBGRAPH)
    blocks = tuple(tuple(v + 1 for v in block) for block in blocks0)
    return Condensation(blocks=blocks, kinds=tuple(kinds),
                        topo_order=tuple(range(len(blocks))))


def is_acyclic(w):
    """True iff ``graph w`` has no cycle (only singleton SCCs, no self-loop)."""
    a = as_matrix(w)
    if np.any(np.diag(a) != 0):
        return False
    return all(len(b) == 1 for b in _blocks0(a))


def _gelfand_block(b, tol, kmax):
    """Spectral radius of one (irreducible or 1x1) nonnegative block.

    Repeated squaring of the block brackets r between the Gelfand estimate
    ``||B^{2^m}||_inf^{1/2^m}`` from above and the Collatz-style bound
    ``max(min row sum, max diagonal)^{1/2^m}`` from below; the bracket
    closes because the block is irreducible.
    """
    n = b.shape[0]
    if n == 1:
        return float(b[0, 0])
    c = b.copy()
    # keep entries near unit scale so squaring never overflows
    scale = float(np.abs(c).max())
    if scale == 0.0:
        return 0.0
    c /= scale
    logscale = math.log(scale)
    power = 1
    for _ in range(kmax):
        rowsums = c.sum(axis=1)
        hi = float(rowsums.max())
        lo = max(float(rowsums.min()), float(np.diag(c).max()))
        upper = math.exp((logscale + math.log(hi)) / power) if hi > 0 else 0.0
        lower = math.exp((logscale + math.log(lo)) / power) if lo > 0 else 0.0
        if upper - lower <= 2.0 * tol:
            return 0.5 * (upper + lower)
        if upper <= tol:
            return 0.5 * upper
        c = c @ c
        power *= 2
        scale = float(np.abs(c).max())
        if scale == 0.0:
            return 0.0
        c /= scale
        logscale = 2.0 * logscale + math.log(scale)
    raise NoConvergence(kmax, "spectral radius bracket did not close")


def spectral_radius(a, tol=1e-12, kmax=200):
    """Spectral radius of a nonnegative matrix within ``tol``.

    Computed blockwise over the SCC condensation (the spectrum of a
    block-triangular matrix is the union of its diagonal blocks), which keeps
    the Gelfand repeated-squaring estimate sharp on reducible matrices where
    plain power iteration can stall.
    """
    m = as_matrix(a)
    if np.any(m < 0):
        raise NonNegativityViolated("spectral_radius requires a nonnegative matrix")
    if tol <= 0 or kmax <= 0:
        raise DimensionMismatch("tol and kmax must be positive")
    r = 0.0
    for block in _blocks0(m):
        sub = m[np.ix_(block, block)]
        r = max(r, _gelfand_block(sub, tol, kmax))
    return r


def contraction_modulus(w, beta):
    """``r(|W| diag(beta))`` for Lipschitz constants ``beta >= 0``."""
    m = as_matrix(w)
    b = as_vector(beta, m.shape[0], "beta")
    if np.any(b < 0):
        raise NonNegativityViolated("Lipschitz constants must be nonnegative")
    return spectral_radius(np.abs(m) * b[None, :])


def weakly_chained_check(w, orientation=ROW):
    """Check weakly chained substochasticity of ``w`` (or ``w^T``).

    Succeeds iff the matrix is substochastic in the stated orientation and
    every vertex either has row sum strictly below one or a positive-weight
    path to such a vertex.  Returns a :class:`ChainWitness` on success, a
    :class:`ChainFailure` otherwise.
    """
    a = as_matrix(w)
    if np.any(a < 0):
        raise NonNegativityViolated("weakly_chained_check requires W >= 0")
    if orientation not in (ROW, COLUMN):
        raise DimensionMismatch(f"orientation must be {ROW!r} or {COLUMN!r}")
    m = a if orientation == ROW else a.T
    n = m.shape[0]
    sums = m.sum(axis=1)
    bad = np.nonzero(sums > 1.0 + DEFICIENCY_TOL)[0]
    if len(bad):
        return ChainFailure("not_substochastic", tuple(int(v) + 1 for v in bad))
    deficient = np.nonzero(sums < 1.0 - DEFICIENCY_TOL)[0]
    if len(deficient) == 0:
        return ChainFailure("no_chain", tuple(range(1, n + 1)))
    # BFS along reversed edges, recording for each vertex its next hop
    # toward a deficient vertex.
    next_hop = {int(d): None for d in deficient}
    queue = [int(d) for d in deficient]
    head = 0
    while head < len(queue):
        j = queue[head]
        head += 1
        for i in np.nonzero(m[:, j] > 0)[0]:
            i = int(i)
            if i not in next_hop:
                next_hop[i] = j
                queue.append(i)
    unreached = [v for v in range(n) if v not in next_hop]
    if unreached:
        return ChainFailure("no_chain", tuple(v + 1 for v in unreached))
    deficient_set = set(int(d) for d in deficient)
    chains = {}
    for v in range(n):
        if v in deficient_set:
            continue
        path = [v]
        while path[-1] not in deficient_set:
            path.append(next_hop[path[-1]])
        chains[v + 1] = tuple(p + 1 for p in path)
    return ChainWitness(orientation=orientation,
                        deficient=tuple(int(d) + 1 for d in sorted(deficient)),
                        chains=chains)


def perron_vector(a, side, tol=1e-10, kmax=100000):
    """Perron eigenpair of an irreducible nonnegative matrix.

    Returns ``(r, v)``: the spectral radius and the strictly positive left
    (``vA = r v``) or right (``A v^T = r v^T``) eigenvector, normalised to
    unit sum, with residual ``max|vM - r v| <= tol``.  A positive diagonal
    shift makes the power iteration converge on periodic matrices too.
    """
    m0 = as_matrix(a)
    if np.any(m0 < 0):
        raise NonNegativityViolated("perron_vector requires A >= 0")
    if side not in (LEFT, RIGHT):
        raise DimensionMismatch(f"side must be {LEFT!r} or {RIGHT!r}")
    if len(_blocks0(m0)) != 1:
        raise NotIrreducible("matrix is reducible (condensation has several blocks)")
    m = m0 if side == LEFT else m0.T
    n = m.shape[0]
    shift = 0.5 * max(1.0, float(np.abs(m).sum(axis=1).max()))
    v = np.full(n, 1.0 / n)
    for _ in range(kmax):
        u = v @ m + shift * v
        # Collatz-Wielandt bracket on the shifted (primitive) matrix:
        # min u/v <= r + shift <= max u/v certifies the eigenvalue.
        ratios = u / v
        r = 0.5 * (float(ratios.min()) + float(ratios.max())) - shift
        v = u / u.sum()
        w = v @ m
        if (float(ratios.max()) - float(ratios.min()) <= tol
                and float(np.abs(w - r * v).max()) <= tol):
            return r, v
    raise NoConvergence(kmax, "Perron iteration did not reach the residual tolerance")


def principal_submatrix(a, remove):
    """Submatrix after deleting the 1-based ``remove`` rows and columns."""
    m = as_matrix(a)
    n = m.shape[0]
    removed = set(int(v) for v in remove)
    if not removed.issubset(set(range(1, n + 1))):
        raise DimensionMismatch(f"remove set {sorted(removed)} out of range 1..{n}")
    if len(removed) >= n:
        raise RemoveAll("cannot remove every vertex")
    keep = [v for v in range(n) if v + 1 not in removed]
    return m[np.ix_(keep, keep)]


def linear_solve(a, b):
    """Solve the row-vector system ``x A = b`` by Gaussian elimination.

    Partial pivoting; a pivot below ``1e-12`` times the max-entry scale of
    ``A`` raises :class:`Singular` carrying the pivot step.
    """
    m = as_matrix(a)
    rhs = as_vector(b, m.shape[0], "b")
    x, pivot = kernels.gauss_solve(m, rhs)
    if pivot:
        raise Singular(pivot)
    return x
