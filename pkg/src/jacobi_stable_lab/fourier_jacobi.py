"""Fourier-Jacobi coefficients, partial sums and random coefficients."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .jacobi_core import (
    JacobiParams,
    WeightParams,
    default_quadrature_order,
    gauss_jacobi_rule,
    orthonormal_table,
    weight_eval,
)
from .stable_process import StablePath


class IntegrandError(ValueError):
    """A target function returned a non-finite value where it was sampled."""


@dataclass(frozen=True)
class TargetFunction:
    evaluator: Callable[[np.ndarray], np.ndarray]
    descriptor: str
    known_degree: int | None = None
    smoothness: str = ""

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        return np.broadcast_to(np.asarray(self.evaluator(y), dtype=float), y.shape)


def _poly(coeffs: list[float]) -> TargetFunction:
    degree = len(coeffs) - 1
    while degree > 0 and coeffs[degree] == 0:
        degree -= 1
    body = ",".join(repr(c) for c in coeffs)
    return TargetFunction(
        evaluator=lambda y: np.polynomial.polynomial.polyval(y, coeffs),
        descriptor=f"poly:{body}",
        known_degree=degree,
        smoothness="polynomial",
    )


CATALOG = {
    "one": lambda: TargetFunction(lambda y: np.ones_like(y), "one", 0, "polynomial"),
    "identity": lambda: TargetFunction(lambda y: y, "identity", 1, "polynomial"),
    "abs": lambda: TargetFunction(np.abs, "abs", None, "Lipschitz, kink at 0"),
    "sqrt1my": lambda: TargetFunction(lambda y: np.sqrt(1.0 - y), "sqrt1my", None, "Hoelder-1/2 at y=1, smooth inside"),
    "step": lambda: TargetFunction(np.sign, "step", None, "jump at 0"),
}


def catalog_help() -> str:
    return "one, identity, poly:c0,c1,..., abs, sqrt1my, step"


def target_from_descriptor(text: str) -> TargetFunction:
    """Resolve a catalog name such as ``abs`` or ``poly:1,0,-2``."""
    text = text.strip()
    if text.startswith("poly:"):
        try:
            coeffs = [float(c) for c in text[5:].split(",") if c.strip()]
        except ValueError as exc:
            raise ValueError(f"bad polynomial coefficients in {text!r}") from exc
        if not coeffs:
            raise ValueError("poly: needs at least one coefficient")
        return _poly(coeffs)
    if text not in CATALOG:
        raise ValueError(f"unknown target function {text!r}; known: {catalog_help()}")
    return CATALOG[text]()


@dataclass(frozen=True)
class ExpansionCoefficients:
    values: np.ndarray
    params: JacobiParams
    source: str = ""
    quadrature_order: int = 0

    def __post_init__(self):
        if self.values.ndim != 1 or self.values.size < 1:
            raise ValueError("need at least one coefficient")
        self.values.setflags(write=False)

    def __len__(self) -> int:
        return self.values.size


def coefficients(f, N: int, params: JacobiParams, order: int | None = None) -> ExpansionCoefficients:
    """a_n = integral of f p_n rho^{(gamma,delta)} for n = 0..N by Gauss-Jacobi quadrature.

    The rule has ``max(64, 2N + 16)`` nodes unless ``order`` is given; one
    rule serves every n.
    """
    if int(N) != N or N < 0:
        raise ValueError(f"N must be a nonnegative integer, got {N}")
    N = int(N)
    m = default_quadrature_order(N) if order is None else int(order)
    rule = gauss_jacobi_rule(m, params)
    fvals = np.asarray(f(rule.nodes), dtype=float)
    if not np.all(np.isfinite(fvals)):
        raise IntegrandError(f"target {getattr(f, 'descriptor', f)!r} is not finite at a quadrature node")
    basis = orthonormal_table(N, params, rule.nodes)
    values = basis.T @ (rule.weights * fvals)
    return ExpansionCoefficients(values=values, params=params, source=getattr(f, "descriptor", "custom"), quadrature_order=m)


def partial_sum(coeffs: ExpansionCoefficients, n: int, y):
    """sum_{k<n} a_k p_k(y)."""
    if n < 1 or n > len(coeffs):
        raise IndexError(f"partial sum of order {n} needs 1 <= n <= {len(coeffs)}")
    basis = orthonormal_table(n - 1, coeffs.params, y)
    out = basis @ coeffs.values[:n]
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class RandomCoefficients:
    values: np.ndarray
    integration_weight: WeightParams
    basis_params: JacobiParams
    path_id: int

    def __post_init__(self):
        self.values.setflags(write=False)

    def __len__(self) -> int:
        return self.values.size


def _check_weight(weight) -> None:
    if not weight.is_continuous:
        raise ValueError("stochastic integrands need eta, tau >= 0 so the weight is continuous on [-1, 1]")


def integrand_matrix(grid: np.ndarray, N: int, basis: JacobiParams, weight: WeightParams) -> np.ndarray:
    """p_k(t_i) rho^{(eta,tau)}(t_i) at the left endpoints; shape (G, N+1)."""
    _check_weight(weight)
    left = np.asarray(grid, dtype=float)[:-1]
    return orthonormal_table(N, basis, left) * weight_eval(weight, left)[:, None]


def random_coefficients(path: StablePath, N: int, basis: JacobiParams, weight: WeightParams) -> RandomCoefficients:
    """A_0..A_N on one path, each a left-endpoint sum in ascending grid order."""
    if path.grid.size < 2:
        raise ValueError("grid too coarse")
    phi = integrand_matrix(path.grid, N, basis, weight)
    values = np.cumsum(phi * path.increments[:, None], axis=0)[-1]
    return RandomCoefficients(values=values, integration_weight=weight, basis_params=basis, path_id=path.seed)


def random_coefficient(path: StablePath, n: int, basis: JacobiParams, weight: WeightParams) -> float:
    """A_n(omega): integral of p_n rho^{(eta,tau)} against the path."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    return float(random_coefficients(path, n, basis, weight).values[n])
