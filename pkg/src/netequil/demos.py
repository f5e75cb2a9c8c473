"""Built-in worked examples with their published expected outputs.

Each demo embeds exact printed inputs and the printed expected equilibrium,
runs the appropriate solver, and reports the deviation against the stated
tolerance.  Demo names are stable CLI identifiers.
"""

import math

import numpy as np

from . import oracle, solver
from .netmodel import bounded_identity_network
from .matgraph import contraction_modulus
from .reporting import jsonable

W_RING = [[0.0, 1.0], [1.0, 0.0]]

W_A = [[0.0, 2.0, 0.0, 0.0],
       [0.5, 0.0, 0.5, 0.0],
       [0.0, 0.0, 0.0, 0.8],
       [0.0, 0.0, 0.8, 0.0]]

W_B = [[0.0, 2.0, 0.1, 0.8],
       [0.5, 0.0, 0.8, 0.1],
       [0.0, 0.0, 0.0, 0.9],
       [0.0, 0.0, 0.9, 0.0]]

EPS_A = [0.2, -0.6, -0.2, 0.2]
EPS_B = [0.2, 0.0, -0.2, 0.2]

LOWER_A = [0.0] * 4
LOWER_B = [0.1] * 4
UPPER_4 = [2.0] * 4

W_SEVEN = [
    [0.0, 0.4, 0.15, 0.0, 0.4, 0.05, 0.0],
    [0.4, 0.0, 0.15, 0.25, 0.0, 0.2, 0.0],
    [0.3, 0.1, 0.0, 0.25, 0.15, 0.2, 0.0],
    [0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
]
UPPER_SEVEN = [5.0, 10.0, 10.0, 8.0, 10.0, 10.0, 6.0]
EPS_SEVEN = [2e-5, 1e-5, -1e-5, 3e-5, 2e-5, -1e-5, -2e-5]
SEVEN_EXPECTED = [2.857e-5, 2.143e-5, 0.0, 8.0, 8.00003, 0.0, 0.0]

W_TIGHT = [[0.0, 2.0], [3.0, 0.0]]

_COMPARATIVE = {
    "comparative-a": (LOWER_A, W_A, EPS_A, [0.2, 0.0, 0.0, 0.2]),
    "comparative-b": (LOWER_B, W_A, EPS_A, [0.25, 0.1, 0.1, 0.28]),
    "comparative-c": (LOWER_A, W_B, EPS_A, [0.2, 0.0, 0.7579, 1.0421]),
    "comparative-d": (LOWER_A, W_A, EPS_B, [1.2, 2.0, 2.0, 1.8]),
    "comparative-e": (LOWER_B, W_B, EPS_B, [1.2, 2.0, 2.0, 2.0]),
}

DEMO_NAMES = ("example-3-1", "comparative-a", "comparative-b", "comparative-c",
              "comparative-d", "comparative-e", "seven-node",
              "spectral-tightness")


def demo_network(name):
    """The exact published inputs of a named demo, as a Network."""
    if name == "example-3-1":
        return bounded_identity_network(W_RING, [1.0, -1.0], [-2.0, -2.0],
                                        [2.0, 2.0])
    if name in _COMPARATIVE:
        lower, w, eps, _ = _COMPARATIVE[name]
        return bounded_identity_network(w, eps, lower, UPPER_4)
    if name == "seven-node":
        return bounded_identity_network(W_SEVEN, EPS_SEVEN, [0.0] * 7,
                                        UPPER_SEVEN)
    if name == "spectral-tightness":
        return bounded_identity_network(W_TIGHT, [-6.0, 2.0], [0.0, 0.0],
                                        [5.0, 5.0])
    raise KeyError(name)


def run_demo(name, tol=1e-9):
    """Run a named demo and return a plain dict with the expected values,
    the computed ones, and a pass flag at the demo's stated tolerance."""
    if name not in DEMO_NAMES:
        raise KeyError(name)
    net = demo_network(name)

    if name in _COMPARATIVE:
        expected = np.array(_COMPARATIVE[name][3])
        report = solver.solve_tarski(net, solver.ABOVE, tol=tol)
        err = float(np.max(np.abs(report.x - expected)))
        return {
            "demo": name,
            "description": "comparative-statics table entry, greatest "
                           "equilibrium by monotone iteration from above",
            "report": jsonable(report),
            "expected": expected.tolist(),
            "tolerance": 1e-4,
            "max_abs_error": err,
            "passed": err <= 1e-4,
        }

    if name == "seven-node":
        expected = np.array(SEVEN_EXPECTED)
        report = solver.solve_algorithm1(net, tol=tol)
        err = float(np.max(np.abs(report.x - expected)))
        found = oracle.enumerate_equilibria(net, tol=tol)
        oracle_err = (float(np.max(np.abs(found.points[0] - report.x)))
                      if len(found.points) == 1 and not found.families
                      else math.inf)
        return {
            "demo": name,
            "description": "seven-agent clearing system solved by the "
                           "finite fictitious-default search",
            "report": jsonable(report),
            "expected": expected.tolist(),
            "tolerance": 1e-4,
            "max_abs_error": err,
            "oracle_points": len(found.points),
            "oracle_max_abs_error": oracle_err,
            "passed": err <= 1e-4 and oracle_err <= 1e-9,
        }

    if name == "example-3-1":
        report = solver.solve_tarski(net, solver.ABOVE, tol=tol)
        probe = solver.multiplicity_probe(net, report.x, tol=tol)
        payload = {
            "demo": name,
            "description": "two-agent ring with offsetting shocks: a full "
                           "line segment of equilibria",
            "report": jsonable(report),
            "probe": jsonable(probe),
            "expected_endpoints": [[-1.0, -2.0], [2.0, 1.0]],
            "tolerance": 1e-6,
        }
        if isinstance(probe, solver.MultiplicityCertificate):
            lo_end = report.x + probe.t_range[0] * probe.direction
            hi_end = report.x + probe.t_range[1] * probe.direction
            ends = sorted([lo_end.tolist(), hi_end.tolist()])
            err = float(np.max(np.abs(
                np.array(ends) - np.array(payload["expected_endpoints"]))))
            payload["endpoints"] = ends
            payload["max_abs_error"] = err
            payload["passed"] = err <= 1e-6
        else:
            payload["passed"] = False
        return payload

    # spectral-tightness: with r(|W| diag beta) above one the bounded system
    # keeps an equilibrium but loses uniqueness and global stability.
    modulus = contraction_modulus(net.w, np.ones(2))
    found = oracle.enumerate_equilibria(net, tol=tol)
    expected = [[0.0, 2.0], [5.0, 5.0]]
    pts = sorted(p.tolist() for p in found.points)
    err = (float(np.max(np.abs(np.array(pts) - np.array(expected))))
           if len(pts) == 2 else math.inf)
    return {
        "demo": name,
        "description": "contraction modulus above one: two isolated "
                       "equilibria coexist, so the spectral condition is "
                       "tight for uniqueness",
        "contraction_modulus": modulus,
        "modulus_exact": math.sqrt(6.0),
        "equilibria": pts,
        "families": len(found.families),
        "expected": expected,
        "tolerance": 1e-9,
        "max_abs_error": err,
        "passed": err <= 1e-9 and len(found.families) == 0,
    }
