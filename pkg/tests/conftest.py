"""Shared test fixtures: matrix/network generators and independent oracles.

The eigenvalue oracle deliberately goes through ``numpy.linalg`` so that the
production Gelfand path is checked against an independent route.
"""

import numpy as np
import pytest

from netequil.netmodel import ClampedAffine, Network, bounded_identity_network

W_RING = np.array([[0.0, 1.0], [1.0, 0.0]])

W_A = np.array([[0.0, 2.0, 0.0, 0.0],
                [0.5, 0.0, 0.5, 0.0],
                [0.0, 0.0, 0.0, 0.8],
                [0.0, 0.0, 0.8, 0.0]])

W_B = np.array([[0.0, 2.0, 0.1, 0.8],
                [0.5, 0.0, 0.8, 0.1],
                [0.0, 0.0, 0.0, 0.9],
                [0.0, 0.0, 0.9, 0.0]])

EPS_A = np.array([0.2, -0.6, -0.2, 0.2])
EPS_B = np.array([0.2, 0.0, -0.2, 0.2])

W_SEVEN = np.array([
    [0.0, 0.4, 0.15, 0.0, 0.4, 0.05, 0.0],
    [0.4, 0.0, 0.15, 0.25, 0.0, 0.2, 0.0],
    [0.3, 0.1, 0.0, 0.25, 0.15, 0.2, 0.0],
    [0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
])
UPPER_SEVEN = np.array([5.0, 10.0, 10.0, 8.0, 10.0, 10.0, 6.0])
EPS_SEVEN = np.array([2e-5, 1e-5, -1e-5, 3e-5, 2e-5, -1e-5, -2e-5])


def eig_radius(a):
    """Independent spectral-radius oracle via the dense eigensolver."""
    return float(np.max(np.abs(np.linalg.eigvals(np.asarray(a, dtype=float)))))


def ring_net(shock, bound=2.0):
    n = len(shock)
    return bounded_identity_network(W_RING, shock, [-bound] * n, [bound] * n)


def clamp_net(w, shock, lower, upper):
    return bounded_identity_network(w, shock, lower, upper)


def random_contracting(rng, n, target=0.8):
    """Mixed-sign W and clamp-free affine responses with r(|W| diag b) near
    ``target`` (< 1)."""
    w = rng.normal(size=(n, n)) * (rng.random((n, n)) < 0.7)
    beta = rng.uniform(0.2, 1.5, n)
    rho = eig_radius(np.abs(w) * beta[None, :])
    if rho > 0:
        w *= target * rng.uniform(0.6, 1.0) / rho
    functions = tuple(ClampedAffine(float(o), float(b))
                      for o, b in zip(rng.normal(size=n), beta))
    return Network(w=w, functions=functions, shock=rng.normal(size=n))


def random_irreducible_stochastic(rng, n):
    """Strictly positive rows summing to one (hence irreducible)."""
    w = rng.uniform(0.05, 1.0, (n, n))
    return w / w.sum(axis=1, keepdims=True)


def random_weakly_chained(rng, n):
    """Row-substochastic matrix where every full row leads to a deficient one.

    Vertices are laid out in a random order with a deficient prefix; every
    later vertex gets a guaranteed edge to some earlier vertex, so a chain to
    the deficient set always exists.
    """
    order = rng.permutation(n)
    n_def = int(rng.integers(1, n))
    w = np.zeros((n, n))
    for pos in range(n):
        v = order[pos]
        row = rng.uniform(0.0, 1.0, n) * (rng.random(n) < 0.5)
        if pos >= n_def:
            row[order[rng.integers(0, pos)]] += 0.5
        total = row.sum()
        target = rng.uniform(0.1, 0.9) if pos < n_def else 1.0
        if total > 0:
            row *= target / total
        w[v] = row
    return w


def random_bounded_identity(rng, n, shock_scale=1.0):
    """Row-stochastic positive W with finite clamp bounds and generic shocks."""
    w = random_irreducible_stochastic(rng, n)
    lo = rng.uniform(-2.0, 0.0, n)
    hi = lo + rng.uniform(0.5, 3.0, n)
    eps = rng.uniform(-1.0, 1.0, n) * shock_scale
    return bounded_identity_network(w, eps, lo, hi)


def random_en_network(rng, n):
    """Random clearing network: positive liabilities, row-stochastic W,
    nonnegative cash with at least one strictly positive entry."""
    from netequil.netmodel import EisenbergNoe, build_network

    liab = rng.uniform(0.1, 2.0, (n, n))
    np.fill_diagonal(liab, 0.0)
    cash = rng.uniform(0.0, 1.0, n)
    cash[int(rng.integers(0, n))] += 0.5
    return build_network(EisenbergNoe(liabilities=liab, cash=cash))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
