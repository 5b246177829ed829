"""Jacobi polynomials, Jacobi weights and Gauss-Jacobi quadrature.

Everything here works on the classical convention

    P_n^{(a,b)}(1) = binom(n + a, n),   weight (1 - y)^a (1 + y)^b,

and the orthonormal family p_n = P_n / sqrt(h_n) built on top of it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import betaln, gammaln


class QuadratureError(RuntimeError):
    """The eigenvalue stage of a quadrature construction failed."""


@dataclass(frozen=True)
class JacobiParams:
    """Exponents (gamma, delta) of (1 - y) and (1 + y) indexing a Jacobi family."""

    gamma: float
    delta: float

    def __post_init__(self):
        for name in ("gamma", "delta"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= -1.0:
                raise ValueError(f"{name} must be > -1, got {value}")

    @property
    def exponents(self) -> tuple[float, float]:
        return self.gamma, self.delta


@dataclass(frozen=True)
class WeightParams:
    """Exponents (eta, tau) of a weight (1 - y)^eta (1 + y)^tau."""

    eta: float
    tau: float

    def __post_init__(self):
        for name in ("eta", "tau"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= -1.0:
                raise ValueError(f"{name} must be > -1, got {value}")

    @property
    def exponents(self) -> tuple[float, float]:
        return self.eta, self.tau

    @property
    def is_continuous(self) -> bool:
        """True when the weight is bounded and continuous on [-1, 1]."""
        return self.eta >= 0 and self.tau >= 0


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    params: JacobiParams
    order: int = field(default=0)

    def __post_init__(self):
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    def integrate(self, values) -> float:
        """Sum of ``values`` (sampled at the nodes) against the weights."""
        return float(np.dot(self.weights, values))


def _exponents(params) -> tuple[float, float]:
    if isinstance(params, (JacobiParams, WeightParams)):
        return params.exponents
    a, b = params
    return float(a), float(b)


def weight_eval(params, y):
    """Evaluate (1 - y)^a (1 + y)^b.

    ``params`` may be JacobiParams, WeightParams or a plain (a, b) pair.
    An endpoint with a negative exponent yields ``inf``; with a positive
    exponent it yields 0; a zero exponent contributes a factor 1.
    """
    a, b = _exponents(params)
    y_arr = np.asarray(y, dtype=float)
    if np.any(np.abs(y_arr) > 1.0) or np.any(np.isnan(y_arr)):
        raise ValueError("weight_eval requires -1 <= y <= 1")
    with np.errstate(divide="ignore"):
        left = np.power(1.0 - y_arr, a) if a != 0 else np.ones_like(y_arr)
        right = np.power(1.0 + y_arr, b) if b != 0 else np.ones_like(y_arr)
    out = left * right
    # 0 * inf can only arise when both endpoints coincide, which cannot happen
    if np.ndim(out) == 0:
        return float(out)
    return out


def _recurrence_table(n_max: int, a: float, b: float, y: np.ndarray) -> np.ndarray:
    """Classical P_0..P_{n_max} at ``y``; shape ``y.shape + (n_max + 1,)``."""
    out = np.empty(y.shape + (n_max + 1,), dtype=float)
    out[..., 0] = 1.0
    if n_max == 0:
        return out
    out[..., 1] = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * y
    ab = a + b
    for n in range(2, n_max + 1):
        c = 2.0 * n + ab
        lead = 2.0 * n * (n + ab) * (c - 2.0)
        mid = (c - 1.0) * (c * (c - 2.0) * y + a * a - b * b)
        last = 2.0 * (n + a - 1.0) * (n + b - 1.0) * c
        out[..., n] = (mid * out[..., n - 1] - last * out[..., n - 2]) / lead
    return out


def jacobi_table(n_max: int, params: JacobiParams, y) -> np.ndarray:
    """Classical Jacobi polynomials of degree 0..n_max at every ``y``."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    return _recurrence_table(int(n_max), params.gamma, params.delta, np.asarray(y, dtype=float))


def jacobi_eval(n: int, params: JacobiParams, y):
    """Classical Jacobi polynomial P_n^{(gamma, delta)}(y) by three-term recurrence."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    values = jacobi_table(n, params, y)[..., n]
    return float(values) if np.ndim(values) == 0 else values


def log_norm_square(n: int, params: JacobiParams) -> float:
    a, b = params.gamma, params.delta
    if n == 0:
        return (a + b + 1.0) * math.log(2.0) + float(betaln(a + 1.0, b + 1.0))
    return (
        (a + b + 1.0) * math.log(2.0)
        - math.log(2.0 * n + a + b + 1.0)
        + float(gammaln(n + a + 1.0) + gammaln(n + b + 1.0) - gammaln(n + a + b + 1.0) - gammaln(n + 1.0))
    )


def norm_square(n: int, params: JacobiParams) -> float:
    """Weighted L2 norm squared h_n of the classical P_n^{(gamma, delta)}."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    log_h = log_norm_square(n, params)
    if log_h > 709.0 or log_h < -745.0:
        raise OverflowError(f"h_{n} for {params} is outside double range (log h = {log_h:.1f})")
    return math.exp(log_h)


def orthonormal_table(n_max: int, params: JacobiParams, y) -> np.ndarray:
    """Orthonormal p_0..p_{n_max} at every ``y``; last axis indexes degree."""
    table = jacobi_table(n_max, params, y)
    scale = np.array([norm_square(n, params) for n in range(n_max + 1)])
    return table / np.sqrt(scale)


def orthonormal_eval(n: int, params: JacobiParams, y):
    """Orthonormal Jacobi polynomial p_n^{(gamma, delta)}(y)."""
    values = jacobi_eval(n, params, y) / math.sqrt(norm_square(n, params))
    return values


def weight_mass(params) -> float:
    """Integral of the weight over [-1, 1]: 2^{a+b+1} B(a+1, b+1)."""
    a, b = _exponents(params)
    return math.exp((a + b + 1.0) * math.log(2.0) + float(betaln(a + 1.0, b + 1.0)))


def _jacobi_matrix(m: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of the symmetric Jacobi matrix of order m."""
    n = np.arange(m, dtype=float)
    diag = np.empty(m)
    diag[0] = (b - a) / (a + b + 2.0)
    if m > 1:
        c = 2.0 * n[1:] + a + b
        diag[1:] = (b * b - a * a) / (c * (c + 2.0))
    off = np.empty(max(m - 1, 0))
    if m > 1:
        off[0] = 2.0 / (a + b + 2.0) * math.sqrt((a + 1.0) * (b + 1.0) / (a + b + 3.0))
        k = n[2:m]
        c = 2.0 * k + a + b
        off[1:] = 2.0 / c * np.sqrt(k * (k + a) * (k + b) * (k + a + b) / ((c + 1.0) * (c - 1.0)))
    return diag, off


def gauss_jacobi_rule(m: int, params: JacobiParams) -> QuadratureRule:
    """m-point Gauss-Jacobi rule (Golub-Welsch), exact to degree 2m - 1."""
    if int(m) != m or m < 1:
        raise ValueError(f"quadrature order must be a positive integer, got {m}")
    m = int(m)
    a, b = params.gamma, params.delta
    diag, off = _jacobi_matrix(m, a, b)
    try:
        nodes, vectors = eigh_tridiagonal(diag, off)
    except np.linalg.LinAlgError as exc:
        raise QuadratureError(f"tridiagonal eigensolver failed for m={m}, {params}") from exc
    if not np.all(np.isfinite(nodes)):
        raise QuadratureError(f"non-finite nodes for m={m}, {params}")
    weights = weight_mass(params) * vectors[0, :] ** 2
    order = np.argsort(nodes)
    nodes = np.clip(nodes[order], np.nextafter(-1.0, 0.0), np.nextafter(1.0, 0.0))
    return QuadratureRule(nodes=nodes, weights=weights[order], params=params, order=m)


def default_quadrature_order(max_degree: int) -> int:
    """Rule size used for every integral with polynomials up to ``max_degree``."""
    return max(64, 2 * int(max_degree) + 16)
