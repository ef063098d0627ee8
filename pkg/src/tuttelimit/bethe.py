"""Limit values on the infinite d-regular tree.

The limit function ``t_d(x)``, the Kesten-McKay density with a
Gauss-Legendre quadrature, and McKay's closed form for
``int ln(1 - gamma t) d rho_KM``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

__all__ = [
    "LimitPoint",
    "KMQuadrature",
    "t_d",
    "limit_branch",
    "km_density",
    "km_quadrature",
    "km_integrate",
    "km_moment",
    "mckay_eta",
    "mckay_log_integral",
    "log_integral_quadrature",
    "integral_closed_form",
    "integral_evaluation_check",
]

QUAD_TOL = 1e-13
QUAD_START = 32
QUAD_MAX = 8192


@dataclass(frozen=True)
class LimitPoint:
    d: int
    x: float
    value: float
    branch: int


def limit_branch(d: int, x: float) -> int:
    return 1 if x <= d - 1 else 2


def t_d(d: int, x: float, y: float | None = None) -> float:
    """Limit of ``T_G(x, y)^(1/v(G))`` over large-girth ``d``-regular graphs.

    ``y`` in ``[0, 1]`` does not change the value; outside that range no
    limit is claimed and a ``ValueError`` is raised.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    if x < 0:
        raise ValueError("x must be non-negative")
    if y is not None and not 0 <= y <= 1:
        raise ValueError("t_d is only defined here for 0 <= y <= 1")
    expo = d / 2 - 1
    if x <= d - 1:
        if d == 2:
            return 1.0
        return (d - 1) * ((d - 1) ** 2 / ((d - 1) ** 2 - x)) ** expo
    return x * (1 + 1 / (x - 1)) ** expo


def limit_point(d: int, x: float) -> LimitPoint:
    return LimitPoint(d, x, t_d(d, x), limit_branch(d, x))


def km_density(d: int, t: float) -> float:
    """Kesten-McKay density ``d sqrt(4(d-1) - t^2) / (2 pi (d^2 - t^2))``."""
    omega = 2 * math.sqrt(d - 1)
    if abs(t) >= omega:
        return 0.0
    return d * math.sqrt(4 * (d - 1) - t * t) / (2 * math.pi * (d * d - t * t))


@dataclass(frozen=True)
class KMQuadrature:
    """Nodes ``t_i`` and weights ``w_i`` with ``sum w_i f(t_i) ~ int f d rho_KM``.

    Built on ``t = omega sin(theta)``: the square-root endpoint behaviour
    becomes a smooth ``cos^2`` factor and Gauss-Legendre in ``theta``
    converges fast.
    """

    d: int
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, f: Callable[[np.ndarray], np.ndarray]) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


@lru_cache(maxsize=64)
def km_quadrature(d: int, n_nodes: int) -> KMQuadrature:
    if d < 2:
        raise ValueError("d must be at least 2")
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    theta = x * np.pi / 2
    omega = 2 * math.sqrt(d - 1)
    if d == 2:
        # arcsine law: the density in theta is the constant 1/pi
        dens = np.full_like(theta, 1 / np.pi)
    else:
        s, c = np.sin(theta), np.cos(theta)
        dens = d * omega**2 * c**2 / (2 * np.pi * (d * d - omega**2 * s**2))
    nodes = omega * np.sin(theta)
    nodes = (nodes - nodes[::-1]) / 2  # exact symmetry
    weights = w * np.pi / 2 * dens
    weights = (weights + weights[::-1]) / 2
    return KMQuadrature(d, nodes, weights)


def km_integrate(d: int, f: Callable[[np.ndarray], np.ndarray], tol: float = QUAD_TOL) -> float:
    """Integrate ``f`` against the Kesten-McKay measure, doubling the node
    count until two successive values agree to ``tol`` (relative)."""
    n = QUAD_START
    prev = km_quadrature(d, n).integrate(f)
    while n < QUAD_MAX:
        n *= 2
        cur = km_quadrature(d, n).integrate(f)
        if abs(cur - prev) <= tol * max(1.0, abs(cur)):
            return cur
        prev = cur
    return prev


def km_moment(d: int, k: int) -> float:
    if not 0 <= k <= 12:
        raise ValueError("moments are supported for 0 <= k <= 12")
    return km_integrate(d, lambda t: t**k)


def mckay_eta(d: int, gamma: float) -> float:
    """``(1 - sqrt(1 - 4(d-1) gamma^2)) / (2 (d-1) gamma^2)``, written as
    ``2 / (1 + sqrt(...))`` so that ``gamma = 0`` gives 1 without cancellation."""
    s = 1 - 4 * (d - 1) * gamma * gamma
    if s < 0:
        raise ValueError("need |gamma| <= 1/omega")
    return 2 / (1 + math.sqrt(s))


def mckay_log_integral(d: int, gamma: float) -> float:
    """Closed form of ``int ln(1 - gamma t) d rho_KM(t)`` for ``|gamma| < 1/omega``."""
    omega = 2 * math.sqrt(d - 1)
    if abs(gamma) * omega >= 1:
        raise ValueError(f"|gamma| must be below 1/omega = {1 / omega}")
    eta = mckay_eta(d, gamma)
    return math.log(1 / eta) + (d / 2 - 1) * math.log((d - 1) / (d - eta))


def log_integral_quadrature(d: int, gamma: float) -> float:
    return km_integrate(d, lambda t: np.log1p(-gamma * t))


def integral_closed_form(d: int, z: float) -> float:
    """Right-hand side: branch value of ``sqrt z exp(int ln((d+z-1)/sqrt z - t) d rho)``."""
    if z <= d - 1:
        return (d - 1) * ((d - 1) ** 2 / ((d - 1) ** 2 - z)) ** (d / 2 - 1)
    return z * (1 + 1 / (z - 1)) ** (d / 2 - 1)


def integral_evaluation_check(d: int, z: float) -> tuple[float, float]:
    """``(quadrature, closed form)`` for ``sqrt z exp(int ln(u - t) d rho_KM)``,
    ``u = (d + z - 1) / sqrt z``.

    At ``z = d - 1`` the logarithm touches the support edge; the singularity
    is integrable and damped by the density's ``cos^2`` factor, so the same
    quadrature still converges there.
    """
    if z <= 0:
        raise ValueError("z must be positive")
    u = (d + z - 1) / math.sqrt(z)
    quad = math.sqrt(z) * math.exp(km_integrate(d, lambda t: np.log(u - t)))
    return quad, integral_closed_form(d, z)
