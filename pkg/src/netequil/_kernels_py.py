"""Pure-numpy fallback for the hot kernels.

Mirrors the Cython module ``netequil._kernels`` function by function; the
active implementation is chosen in :mod:`netequil.kernels`.  Keep the two in
behavioural lockstep: same pivot rule, same termination rule, same pattern
encoding.
"""

import numpy as np

BACKEND = "python"

#: Relative pivot threshold shared with matgraph.linear_solve.
PIVOT_RTOL = 1e-12


def gauss_solve(a, b):
    """Solve the row-vector system ``x A = b`` by partial-pivot elimination.

    Returns ``(x, 0)`` on success or ``(None, k)`` with the 1-based pivot
    step ``k`` at which elimination broke down.  The singularity threshold is
    ``PIVOT_RTOL * max|A|``.
    """
    n = a.shape[0]
    if n == 0:
        return np.zeros(0), 0
    scale = np.max(np.abs(a))
    if scale == 0.0:
        return None, 1
    threshold = PIVOT_RTOL * scale
    # x A = b  <=>  A^T x^T = b^T
    m = np.array(a.T, dtype=float, order="C")
    rhs = np.array(b, dtype=float)
    for k in range(n):
        p = k + int(np.argmax(np.abs(m[k:, k])))
        if abs(m[p, k]) < threshold:
            return None, k + 1
        if p != k:
            m[[k, p]] = m[[p, k]]
            rhs[[k, p]] = rhs[[p, k]]
        factors = m[k + 1:, k] / m[k, k]
        m[k + 1:, k:] -= factors[:, None] * m[k, k:]
        rhs[k + 1:] -= factors * rhs[k]
    x = np.zeros(n)
    for k in range(n - 1, -1, -1):
        x[k] = (rhs[k] - m[k, k + 1:] @ x[k + 1:]) / m[k, k]
    return x, 0


def clamp_iterate(w, eps, off, gain, lo, hi, x0, tol, kmax):
    """Iterate ``x <- clip(off + gain * (x W + eps), lo, hi)``.

    Stops when successive iterates differ by at most ``tol`` in max norm and
    returns ``(x, diff, iters)`` where ``x`` is the pre-image of the last
    step, so its fixed-point residual equals ``diff`` exactly.
    """
    x = np.array(x0, dtype=float)
    diff = np.inf
    for k in range(1, kmax + 1):
        y = np.clip(off + gain * (x @ w + eps), lo, hi)
        diff = float(np.max(np.abs(y - x))) if len(x) else 0.0
        if diff <= tol:
            return x, diff, k
        x = y
    return x, diff, kmax


def pattern_scan(w, eps, lo, hi, tol):
    """Enumerate all 3^n boundary patterns of a bounded-identity network.

    Pattern code ``p`` assigns agent ``k`` the tag ``(p // 3**k) % 3`` with
    0 = interior, 1 = lower, 2 = upper.  Returns
    ``(points, point_patterns, singular_patterns)``: consistent isolated
    equilibria with their codes, plus the codes whose interior block was
    singular (candidates for solution families, analysed by the caller).
    """
    n = w.shape[0]
    points = []
    point_patterns = []
    singular = []
    pow3 = [3 ** k for k in range(n)]
    idx = np.arange(n)
    for code in range(3 ** n):
        tags = np.array([(code // pow3[k]) % 3 for k in range(n)])
        v = np.where(tags == 1, lo, np.where(tags == 2, hi, 0.0))
        interior = idx[tags == 0]
        c = v @ w + eps
        x = v.copy()
        if len(interior):
            a = np.eye(len(interior)) - w[np.ix_(interior, interior)]
            sol, pivot = gauss_solve(a, c[interior])
            if pivot:
                singular.append(code)
                continue
            x[interior] = sol
            if np.any(sol <= lo[interior]) or np.any(sol >= hi[interior]):
                continue
        s = x @ w + eps
        if np.any(s[tags == 2] < hi[tags == 2] - tol):
            continue
        if np.any(s[tags == 1] > lo[tags == 1] + tol):
            continue
        points.append(x)
        point_patterns.append(code)
    return points, point_patterns, singular
