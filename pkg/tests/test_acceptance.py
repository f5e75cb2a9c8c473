"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v`` (add ``-s`` to see the
per-criterion lines immediately).
"""

import functools
import math
import sys
import time

import numpy as np
import pytest

from netequil.keyplayer import AUTHORITY, HUB, impact_measure, katz_centrality
from netequil.matgraph import (
    ChainWitness,
    contraction_modulus,
    principal_submatrix,
    spectral_radius,
    weakly_chained_check,
)
from netequil.netmodel import ClampedAffine, Network, bounded_identity_network
from netequil.oracle import (
    ContinuousUniform,
    DiscreteUniform,
    enumerate_equilibria,
    multiplicity_rate,
)
from netequil.solver import (
    ABOVE,
    BELOW,
    MultiplicityCertificate,
    Underdetermined,
    Unique,
    Unsolvable,
    linear_system_solvability,
    multiplicity_probe,
    solve_algorithm1,
    solve_banach,
    solve_tarski,
)

from conftest import (
    EPS_SEVEN,
    UPPER_SEVEN,
    W_A,
    W_RING,
    W_SEVEN,
    clamp_net,
    random_bounded_identity,
    random_contracting,
    random_en_network,
    random_irreducible_stochastic,
    random_weakly_chained,
    ring_net,
)

SEED = 987654321


def criterion(number, label):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"FAIL criterion {number}: {label}", file=sys.stderr)
                raise
            print(f"PASS criterion {number}: {label}")
        return run
    return wrap


def wa_net(eps):
    return clamp_net(W_A, eps, [0.0] * 4, [2.0] * 4)


@criterion(1, "seven-node fictitious-default demo")
def test_criterion_1_seven_node():
    net = clamp_net(W_SEVEN, EPS_SEVEN, np.zeros(7), UPPER_SEVEN)
    start = time.perf_counter()
    report = solve_algorithm1(net, tol=1e-9)
    elapsed = time.perf_counter() - start
    printed = np.array([2.857e-5, 2.143e-5, 0.0, 8.0, 8.00003, 0.0, 0.0])
    assert np.max(np.abs(report.x - printed)) <= 1e-4
    found = enumerate_equilibria(net, tol=1e-9)
    assert len(found.points) == 1 and not found.families
    assert np.max(np.abs(found.points[0] - report.x)) <= 1e-9
    assert report.iterations <= 7 * 2 ** 6
    assert elapsed < 1.0


@criterion(2, "comparative-statics table reproduced by iteration from above")
def test_criterion_2_comparative_table():
    cases = [
        ([0.0] * 4, W_A, [0.2, -0.6, -0.2, 0.2], [0.2, 0.0, 0.0, 0.2]),
        ([0.1] * 4, W_A, [0.2, -0.6, -0.2, 0.2], [0.25, 0.1, 0.1, 0.28]),
        ([0.0] * 4, np.array([[0.0, 2.0, 0.1, 0.8], [0.5, 0.0, 0.8, 0.1],
                              [0.0, 0.0, 0.0, 0.9], [0.0, 0.0, 0.9, 0.0]]),
         [0.2, -0.6, -0.2, 0.2], [0.2, 0.0, 0.7579, 1.0421]),
        ([0.0] * 4, W_A, [0.2, 0.0, -0.2, 0.2], [1.2, 2.0, 2.0, 1.8]),
        ([0.1] * 4, np.array([[0.0, 2.0, 0.1, 0.8], [0.5, 0.0, 0.8, 0.1],
                              [0.0, 0.0, 0.0, 0.9], [0.0, 0.0, 0.9, 0.0]]),
         [0.2, 0.0, -0.2, 0.2], [1.2, 2.0, 2.0, 2.0]),
    ]
    for lower, w, eps, expected in cases:
        net = clamp_net(w, eps, lower, [2.0] * 4)
        report = solve_tarski(net, ABOVE, tol=1e-10)
        assert np.max(np.abs(report.x - np.array(expected))) <= 1e-4


@criterion(3, "two-agent ring: family certificate and multiplicity rates")
def test_criterion_3_ring_family_and_rates():
    net = ring_net([1.0, -1.0])
    x_star = solve_tarski(net, ABOVE, tol=1e-10).x
    cert = multiplicity_probe(net, x_star, tol=1e-9)
    assert isinstance(cert, MultiplicityCertificate)
    ends = sorted([
        (x_star + cert.t_range[0] * cert.direction).tolist(),
        (x_star + cert.t_range[1] * cert.direction).tolist(),
    ])
    # the family x = (y + 1, y) over y in [-2, 1]
    assert np.max(np.abs(np.array(ends[0]) - [-1.0, -2.0])) <= 1e-6
    assert np.max(np.abs(np.array(ends[1]) - [2.0, 1.0])) <= 1e-6

    template = ring_net([0.0, 0.0])
    discrete = DiscreteUniform(support=((1.0, -1.0), (-1.0, 1.0),
                                        (1.0, 1.0), (-1.0, -1.0)))
    rate = multiplicity_rate(template, discrete, trials=2000, seed=SEED)
    assert abs(rate - 0.5) <= 0.05
    continuous = ContinuousUniform(lower=(-1.0, -1.0), upper=(1.0, 1.0))
    assert multiplicity_rate(template, continuous, trials=2000,
                             seed=SEED) == 0.0


@criterion(4, "multiplicity exactly on the shock line 2 eps1 + eps2 = 0")
def test_criterion_4_wa_multiplicity_line():
    rng = np.random.default_rng(SEED)
    for _ in range(20):
        # on the line, with the critical block interior and its downstream
        # neighbour saturated with slack
        e1 = float(rng.uniform(0.05, 0.45))
        eps = [e1, -2.0 * e1, float(-3.0 - rng.uniform(0.0, 1.0)),
               float(rng.uniform(0.1, 1.9))]
        net = wa_net(eps)
        x_star = np.array([e1 + 0.5, 1.0, 0.0, eps[3]])
        assert net.residual(x_star) <= 1e-9
        cert = multiplicity_probe(net, x_star, tol=1e-9)
        assert isinstance(cert, MultiplicityCertificate)
        assert cert.scc == (1, 2)
        assert cert.witness_residual <= 1e-9
    for _ in range(20):
        eps = rng.uniform(-1.0, 1.0, 4)
        while abs(2.0 * eps[0] + eps[1]) < 0.05:
            eps = rng.uniform(-1.0, 1.0, 4)
        net = wa_net(eps)
        x_star = solve_tarski(net, ABOVE, tol=1e-10).x
        assert isinstance(multiplicity_probe(net, x_star, tol=1e-9), Unique)
        found = enumerate_equilibria(net, tol=1e-9)
        assert len(found.points) == 1 and not found.families


@criterion(5, "contraction modulus value and the iteration speed bound")
def test_criterion_5_contraction_machinery():
    w = np.array([[0.0, 2.0], [4.0 / 7.0, 0.0]])
    modulus = contraction_modulus(w, [5.0 / 4.0, 2.0 / 3.0])
    assert abs(modulus - math.sqrt(20.0 / 21.0)) <= 1e-9

    rng = np.random.default_rng(SEED + 1)
    for _ in range(100):
        net = random_contracting(rng, int(rng.integers(2, 9)))
        beta = np.array([f.gain for f in net.functions])
        a = np.abs(net.w) * beta[None, :]
        x = np.zeros(net.n)
        diffs = []
        for _ in range(50):
            y = net.apply(x)
            diffs.append(float(np.max(np.abs(y - x))))
            x = y
            if diffs[-1] == 0.0:
                break
        power = np.eye(net.n)
        for k in range(1, len(diffs)):
            power = power @ a
            # matrix norm induced by row-vector action: max column sum;
            # the bound can bind exactly, so leave room for float noise
            bound = float(np.abs(power).sum(axis=0).max()) * diffs[0]
            assert diffs[k] <= bound + 1e-12


@criterion(6, "spectral lemmas: submatrices and weak chains are convergent")
def test_criterion_6_spectral_lemmas():
    rng = np.random.default_rng(SEED + 2)
    for _ in range(100):
        n = int(rng.integers(2, 9))
        a = random_irreducible_stochastic(rng, n)
        for i in range(1, n + 1):
            assert spectral_radius(principal_submatrix(a, {i})) < 1.0 - 1e-9
    for _ in range(100):
        n = int(rng.integers(2, 9))
        w = random_weakly_chained(rng, n)
        assert isinstance(weakly_chained_check(w, "row"), ChainWitness)
        assert spectral_radius(w) < 1.0 - 1e-9


def _ordered_contracting_pair(rng):
    """Ordered pair per the increasing-shift hypotheses.

    States are kept nonnegative (responses clamped below at zero): the
    comparison Tx <= T'x needs xW <= xW', which the entrywise order of the
    matrices only gives on nonnegative states.
    """
    n = int(rng.integers(2, 7))
    beta = rng.uniform(0.2, 1.2, n)
    w_hi = rng.uniform(0.0, 1.0, (n, n)) * (rng.random((n, n)) < 0.7)
    rho = float(np.max(np.abs(np.linalg.eigvals(np.abs(w_hi) * beta[None, :]))))
    if rho > 0:
        w_hi *= rng.uniform(0.5, 0.85) / rho
    w_lo = w_hi * rng.uniform(0.0, 1.0, (n, n))
    off_hi = rng.normal(size=n)
    off_lo = off_hi - rng.uniform(0.0, 1.0, n)
    eps_hi = rng.normal(size=n)
    eps_lo = eps_hi - rng.uniform(0.0, 1.0, n)
    small = Network(w=w_lo, functions=tuple(
        ClampedAffine(float(a), float(b), 0.0) for a, b in zip(off_lo, beta)),
        shock=eps_lo)
    large = Network(w=w_hi, functions=tuple(
        ClampedAffine(float(a), float(b), 0.0) for a, b in zip(off_hi, beta)),
        shock=eps_hi)
    return small, large


def _ordered_noncontracting_pair(rng):
    n1 = int(rng.integers(2, 4))
    n2 = int(rng.integers(2, 4))
    n = n1 + n2
    core = rng.uniform(0.1, 1.0, (n1, n1))
    core /= float(np.max(np.abs(np.linalg.eigvals(core))))
    down = rng.uniform(0.1, 1.0, (n2, n2))
    down *= rng.uniform(0.3, 0.7) / float(np.max(np.abs(np.linalg.eigvals(down))))
    bridge_hi = rng.uniform(0.0, 0.5, (n1, n2)) * (rng.random((n1, n2)) < 0.7)
    bridge_lo = bridge_hi * rng.uniform(0.0, 1.0, (n1, n2))
    w_lo = np.block([[core, bridge_lo], [np.zeros((n2, n1)), down]])
    w_hi = np.block([[core, bridge_hi], [np.zeros((n2, n1)), down]])
    # nonnegative clamp ranges keep the states where W <= W' is order-true
    lo_bounds = rng.uniform(0.0, 0.4, n)
    hi_bounds = rng.uniform(1.0, 2.0, n)
    lo_bounds_prime = lo_bounds + rng.uniform(0.0, 0.3, n)
    hi_bounds_prime = hi_bounds + rng.uniform(0.0, 1.0, n)
    eps_hi = rng.uniform(-1.0, 1.0, n)
    eps_lo = eps_hi - rng.uniform(0.0, 1.0, n)
    small = bounded_identity_network(w_lo, eps_lo, lo_bounds, hi_bounds)
    large = bounded_identity_network(w_hi, eps_hi, lo_bounds_prime,
                                     hi_bounds_prime)
    return small, large


@criterion(7, "monotone comparative statics on 200 ordered pairs")
def test_criterion_7_comparative_statics():
    rng = np.random.default_rng(SEED + 3)
    violations = 0
    for _ in range(100):
        small, large = _ordered_contracting_pair(rng)
        x_small = solve_banach(small, tol=1e-11).x
        x_large = solve_banach(large, tol=1e-11).x
        if np.any(x_small > x_large + 1e-8):
            violations += 1
    for _ in range(100):
        small, large = _ordered_noncontracting_pair(rng)
        x_small = solve_tarski(small, ABOVE, tol=1e-11).x
        x_large = solve_tarski(large, ABOVE, tol=1e-11).x
        if np.any(x_small > x_large + 1e-8):
            violations += 1
    assert violations == 0


@criterion(8, "solver cross-agreement on 100 bounded-identity networks")
def test_criterion_8_solver_agreement():
    rng = np.random.default_rng(SEED + 4)
    for _ in range(100):
        net = random_bounded_identity(rng, int(rng.integers(2, 7)))
        a1 = solve_algorithm1(net, tol=1e-11).x
        above = solve_tarski(net, ABOVE, tol=1e-12).x
        below = solve_tarski(net, BELOW, tol=1e-12).x
        found = enumerate_equilibria(net, tol=1e-9)
        assert len(found.points) == 1 and not found.families
        point = found.points[0]
        for candidate in (a1, above, below):
            assert np.max(np.abs(candidate - point)) <= 1e-8


@criterion(9, "positive-cash clearing systems are unique")
def test_criterion_9_en_uniqueness():
    rng = np.random.default_rng(SEED + 5)
    for _ in range(50):
        net = random_en_network(rng, int(rng.integers(3, 8)))
        x_star = solve_tarski(net, ABOVE, tol=1e-11).x
        assert isinstance(multiplicity_probe(net, x_star, tol=1e-9), Unique)
        found = enumerate_equilibria(net, tol=1e-9)
        assert len(found.points) == 1 and not found.families


@criterion(10, "impact measure: Katz product identity and ranking collapse")
def test_criterion_10_key_player():
    rng = np.random.default_rng(SEED + 6)
    for _ in range(50):
        n = int(rng.integers(2, 7))
        w = rng.uniform(0.0, 1.0, (n, n))
        radius = float(np.max(np.abs(np.linalg.eigvals(w))))
        alpha = float(rng.uniform(0.3, 0.85)) / max(radius, 1e-9)
        net = Network(w=w, functions=tuple(ClampedAffine(0.0, alpha)
                                           for _ in range(n)),
                      shock=np.full(n, 1.0 / alpha))
        x_star = solve_banach(net, tol=1e-13).x
        sigma = impact_measure(net, x_star).sigma
        product = (katz_centrality(w, alpha, AUTHORITY)
                   * katz_centrality(w, alpha, HUB))
        assert np.max(np.abs(sigma - product)) <= 1e-10
    for _ in range(20):
        n = 6
        w = rng.uniform(0.1, 1.0, (n, n))
        w *= 1.25 / w.sum(axis=1, keepdims=True)  # constant row sums
        alpha = 0.6
        net = Network(w=w, functions=tuple(ClampedAffine(0.0, alpha)
                                           for _ in range(n)),
                      shock=np.full(n, 1.0 / alpha))
        x_star = solve_banach(net, tol=1e-13).x
        sigma = impact_measure(net, x_star).sigma
        assert np.array_equal(np.argsort(sigma, kind="stable"),
                              np.argsort(x_star, kind="stable"))


@criterion(11, "linear clearing without bounds is almost surely unsolvable")
def test_criterion_11_linear_system():
    rng = np.random.default_rng(SEED + 7)
    for _ in range(1000):
        eps = rng.uniform(-1.0, 1.0, 2)
        outcome = linear_system_solvability(W_RING, eps)
        assert isinstance(outcome, Unsolvable)
    outcome = linear_system_solvability(W_RING, [1.0, -1.0])
    assert isinstance(outcome, Underdetermined)
    assert np.allclose(outcome.direction, [0.5, 0.5], atol=1e-9)
