"""Text descriptors for summation methods and a uniform way to apply them.

Accepted forms::

    identity | rogosinski
    cesaro:phi=1 | riesz:nu=1,mu=2 | vp:s=0.5
    norlund:p=harmonic
    gennorlund:q=one,r=one
    triangular:b=cesaro | triangular:b=identity
    matrix:file=PATH

Weight sequences (``p``, ``q``, ``r``) name a preset: one, harmonic, delta,
inv_sqrt, linear, geom:<ratio>.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import summation as sm


@dataclass(frozen=True)
class SummationMethod:
    descriptor: str
    kind: str  # theta | norlund | gennorlund | triangular
    theta: sm.ThetaMatrix | None = None
    p: str | None = None
    q: str | None = None
    r: str | None = None
    matrix: sm.TriangularMatrix | None = None

    @property
    def acts_on_partial_sums(self) -> bool:
        return self.kind != "theta"

    def terms_needed(self, n: int) -> int:
        """Number of series terms c_0.. needed for the order-n value."""
        return n + 1 if self.acts_on_partial_sums else n

    def apply(self, terms, orders: Sequence[int]) -> np.ndarray:
        """Summed values for each order in ``orders``; ``terms`` has the term index first."""
        terms = np.asarray(terms, dtype=float)
        orders = [int(n) for n in orders]
        need = max(self.terms_needed(n) for n in orders)
        if terms.shape[0] < need:
            raise ValueError(f"{self.descriptor} needs {need} terms, got {terms.shape[0]}")
        if self.kind == "theta":
            return np.stack([np.tensordot(self.theta.row(n), terms[:n], axes=(0, 0)) for n in orders])
        partial = np.cumsum(terms[:need], axis=0)
        means = self.means(partial)
        return means[orders]

    def means(self, partial_sums) -> np.ndarray:
        s = np.asarray(partial_sums, dtype=float)
        length = s.shape[0]
        if self.kind == "norlund":
            return sm.norlund_means(sm.NorlundWeights(sm.weight_sequence(self.p, length)), s)
        if self.kind == "gennorlund":
            w = sm.GeneralizedNorlundWeights(sm.weight_sequence(self.q, length), sm.weight_sequence(self.r, length))
            return sm.generalized_norlund_means(w, s)
        if self.kind == "triangular":
            return sm.triangular_means(self.matrix, s)
        raise TypeError(f"{self.descriptor} acts on coefficients, not partial sums")

    def structural_report(self, n_probe: Sequence[int] = sm.DEFAULT_PROBES) -> sm.ConditionReport:
        """Theta conditions, or Silverman-Toeplitz regularity for partial-sum methods."""
        if self.kind == "theta":
            return sm.check_theta_conditions(self.theta, n_probe)
        if self.kind == "triangular":
            return sm.silverman_toeplitz_check(self.matrix, n_probe)
        return sm.silverman_toeplitz_check(self.as_triangular(max(n_probe)), n_probe)

    def as_triangular(self, n_max: int) -> sm.TriangularMatrix:
        """Row-by-row matrix of a Noerlund-type method up to ``n_max``."""
        length = n_max + 1
        if self.kind == "norlund":
            p = sm.weight_sequence(self.p, length)
            P = np.cumsum(p)
            return sm.TriangularMatrix(self.descriptor, n_max, lambda n: p[n::-1] / P[n])
        if self.kind == "gennorlund":
            q = sm.weight_sequence(self.q, length)
            r = sm.weight_sequence(self.r, length)
            conv = np.convolve(q, r)[:length]
            return sm.TriangularMatrix(self.descriptor, n_max, lambda n: q[n::-1] * r[: n + 1] / conv[n])
        if self.kind == "triangular":
            return self.matrix
        raise TypeError("Theta methods have no partial-sum matrix here")


def _kwargs(body: str, descriptor: str) -> dict[str, str]:
    out = {}
    if not body:
        return out
    # geom:<ratio> contains a colon but never a comma, so split on commas first
    for item in body.split(","):
        if "=" not in item:
            raise ValueError(f"malformed parameter {item!r} in {descriptor!r}")
        key, value = item.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _float(params: dict, key: str, descriptor: str) -> float:
    if key not in params:
        raise ValueError(f"{descriptor!r} is missing {key}=")
    try:
        return float(params[key])
    except ValueError as exc:
        raise ValueError(f"{key}={params[key]!r} in {descriptor!r} is not a number") from exc


def parse_method(descriptor: str) -> SummationMethod:
    text = descriptor.strip()
    name, _, body = text.partition(":")
    name = name.strip().lower()
    params = _kwargs(body, text)
    if name == "identity":
        return SummationMethod(text, "theta", theta=sm.build_identity())
    if name == "rogosinski":
        return SummationMethod(text, "theta", theta=sm.build_rogosinski())
    if name == "cesaro":
        return SummationMethod(text, "theta", theta=sm.build_cesaro(_float(params, "phi", text)))
    if name == "riesz":
        return SummationMethod(text, "theta", theta=sm.build_riesz(_float(params, "nu", text), _float(params, "mu", text)))
    if name in ("vp", "vallee_poussin"):
        return SummationMethod(text, "theta", theta=sm.build_vallee_poussin(_float(params, "s", text)))
    if name == "norlund":
        p = params.get("p", "one")
        sm.weight_sequence(p, 1)
        return SummationMethod(text, "norlund", p=p)
    if name == "gennorlund":
        q, r = params.get("q", "one"), params.get("r", "one")
        sm.weight_sequence(q, 1)
        sm.weight_sequence(r, 1)
        return SummationMethod(text, "gennorlund", q=q, r=r)
    if name == "triangular":
        preset = params.get("b", "cesaro")
        if preset == "cesaro":
            return SummationMethod(text, "triangular", matrix=sm.cesaro_triangular())
        if preset == "identity":
            return SummationMethod(text, "triangular", matrix=sm.identity_triangular())
        raise ValueError(f"unknown triangular preset {preset!r}")
    if name == "matrix":
        if "file" not in params:
            raise ValueError(f"{text!r} needs file=PATH")
        return SummationMethod(text, "triangular", matrix=sm.read_matrix_file(params["file"]))
    raise ValueError(
        f"unknown summation method {text!r}; expected identity, cesaro:phi=, riesz:nu=,mu=, vp:s=, "
        "rogosinski, norlund:p=, gennorlund:q=,r=, triangular:b=, matrix:file="
    )
