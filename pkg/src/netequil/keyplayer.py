"""Key-player analysis: Katz hub/authority centralities, the total-impact
measure of removing an agent from the continuous-time dynamics, and the
asymptotic-stability certificate.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NotConvergent, NotStable
from .matgraph import (
    SPECTRAL_TOL,
    as_matrix,
    as_vector,
    contraction_modulus,
    linear_solve,
    spectral_radius,
)
from .netmodel import network_metadata

HUB = "hub"
AUTHORITY = "authority"

#: Derivatives at clamp breakpoints take the value from the interior of the
#: unclamped region (the small-removal-shock convention).
KINK_CONVENTION = "interior one-sided derivative at clamp breakpoints"


@dataclass(frozen=True)
class ImpactReport:
    """Total impact ``sigma`` per agent, the argmax ``key_player`` (1-based,
    lowest index on ties), and the stability certificate that backs the
    steady-state analysis."""

    sigma: np.ndarray
    key_player: int
    stability_certified: bool
    kink_convention: str = KINK_CONVENTION


def katz_centrality(w, alpha, side=HUB):
    """Katz centrality ``1 (I - alpha W)^{-1}``; ``AUTHORITY`` uses ``W^T``.

    The hub score measures how strongly an agent receives influence, the
    authority score how strongly it sends.
    """
    m = as_matrix(w)
    if side not in (HUB, AUTHORITY):
        raise NotConvergent(f"side must be {HUB!r} or {AUTHORITY!r}")
    if alpha * spectral_radius(np.abs(m)) >= 1.0 - SPECTRAL_TOL:
        raise NotConvergent(
            f"alpha * r(|W|) must be below one, got alpha = {alpha}")
    base = m if side == HUB else m.T
    n = m.shape[0]
    return linear_solve(np.eye(n) - alpha * base, np.ones(n))


def impact_measure(net, x_star):
    """Total impact of removing each agent, evaluated at the steady state.

    ``sigma = 1 [I - diag(f'(x* W + eps)) W^T]^{-1} diag(x*)``; requires the
    asymptotic-stability condition ``r(|W| diag(beta)) < 1``.
    """
    meta = network_metadata(net)
    if meta.beta is None:
        raise NotStable("interaction functions are not differentiable; "
                        "smooth them before computing the impact measure")
    rho = contraction_modulus(net.w, meta.beta)
    if rho >= 1.0 - SPECTRAL_TOL:
        raise NotStable(f"r(|W| diag(beta)) = {rho:.6g} does not certify "
                        "asymptotic stability")
    x_star = as_vector(x_star, net.n, "x_star")
    fprime = net.derivative_profile(net.inputs(x_star))
    m = fprime[:, None] * net.w.T
    receiver = linear_solve(np.eye(net.n) - m, np.ones(net.n))
    sigma = receiver * x_star
    return ImpactReport(sigma=sigma, key_player=int(np.argmax(sigma)) + 1,
                        stability_certified=True)


def stability_certificate(net):
    """True iff the contraction condition certifies asymptotic stability of
    the continuous-time dynamics.  This is the sufficient spectral condition
    only, not an eigenvalue real-part test."""
    meta = network_metadata(net)
    if meta.beta is None or not meta.monotone:
        return False
    return contraction_modulus(net.w, meta.beta) < 1.0 - SPECTRAL_TOL
