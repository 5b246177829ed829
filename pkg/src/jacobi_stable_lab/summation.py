"""Matrix summation methods and checks of their structural conditions.

Two indexing conventions live side by side:

* Theta-methods act on coefficients: row ``n`` holds ``theta_{0,n}..theta_{n-1,n}``
  and the Theta-sum of order n is ``sum_{k<n} theta_{k,n} c_k p_k(y)``; the
  entry ``theta_{n,n}`` is taken to be 0.
* Noerlund, generalized Noerlund and triangular methods act on partial sums
  ``s_k = sum_{j<=k} c_j p_j(y)``, producing one mean per ``n = 0..N``.

With these conventions the (C,1) Theta-sum of order n equals the arithmetic
mean of ``s_0..s_{n-1}``, i.e. the Noerlund mean with constant weights at
index ``n - 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .jacobi_core import orthonormal_table

DEFAULT_PROBES = (8, 16, 32, 64, 128, 256)
GROWTH_RATIO = 1.5
# second differences below this multiple of machine epsilon count as zero
_ZERO_BAND = 64 * np.finfo(float).eps


# ---------------------------------------------------------------------------
# condition reports


@dataclass
class Condition:
    name: str
    verdict: bool | None
    witness: object
    detail: str = ""


@dataclass
class ConditionReport:
    title: str
    conditions: list[Condition] = field(default_factory=list)

    def add(self, name: str, verdict, witness, detail: str = "") -> Condition:
        cond = Condition(name, None if verdict is None else bool(verdict), witness, detail)
        self.conditions.append(cond)
        return cond

    def __getitem__(self, name: str) -> Condition:
        for cond in self.conditions:
            if cond.name == name:
                return cond
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(c.name == name for c in self.conditions)

    def verdict(self, name: str):
        return self[name].verdict

    def to_text(self) -> str:
        lines = [self.title]
        width = max((len(c.name) for c in self.conditions), default=4)
        for c in self.conditions:
            mark = {True: "holds", False: "fails", None: "n/a"}[c.verdict]
            lines.append(f"  {c.name:<{width}}  {mark:<5}  witness={_fmt_witness(c.witness)}" + (f"  ({c.detail})" if c.detail else ""))
        return "\n".join(lines)


def _fmt_witness(w) -> str:
    if isinstance(w, dict):
        return "{" + ", ".join(f"{k}: {_fmt_witness(v)}" for k, v in w.items()) + "}"
    if isinstance(w, (list, tuple)):
        return "[" + ", ".join(_fmt_witness(v) for v in w) + "]"
    if isinstance(w, float):
        return f"{w:.6g}"
    return str(w)


def bounded_verdict(witnesses: Sequence[float]) -> bool:
    """Finite-evidence boundedness: the last witness is at most 1.5x the one before."""
    w = [abs(float(v)) for v in witnesses]
    if len(w) < 2:
        return math.isfinite(w[0]) if w else True
    prev, last = w[-2], w[-1]
    if not math.isfinite(last):
        return False
    if prev == 0.0:
        return last == 0.0
    return last / prev <= GROWTH_RATIO


def vanishing_verdict(witnesses: Sequence[float], floor: float = 1e-12) -> bool:
    """Finite-evidence decay to 0: last witness tiny or at most half the first."""
    w = [abs(float(v)) for v in witnesses]
    if not w or not math.isfinite(w[-1]):
        return False
    return w[-1] <= floor or (len(w) > 1 and w[-1] <= 0.5 * w[0])


# ---------------------------------------------------------------------------
# Theta matrices


@dataclass(frozen=True)
class ThetaMatrix:
    """Lower-triangular summation matrix; ``row(n)`` has ``n`` entries."""

    method_tag: str
    n_max: int | None
    _row: Callable[[int], np.ndarray] = field(repr=False, compare=False)

    def row(self, n: int) -> np.ndarray:
        if n < 1 or (self.n_max is not None and n > self.n_max):
            raise IndexError(f"row {n} outside 1..{self.n_max}")
        r = np.asarray(self._row(int(n)), dtype=float)
        if r.shape != (n,):
            raise ValueError(f"row {n} of {self.method_tag} has {r.size} entries")
        if not np.all(np.isfinite(r)):
            raise ValueError(f"row {n} of {self.method_tag} has non-finite entries")
        return r

    def entry(self, k: int, n: int) -> float:
        return 0.0 if k == n else float(self.row(n)[k])

    def padded_row(self, n: int) -> np.ndarray:
        """theta_{0,n}..theta_{n,n} with the convention theta_{n,n} = 0."""
        return np.append(self.row(n), 0.0)


def _check_n_max(n_max):
    if n_max is not None and (int(n_max) != n_max or n_max < 1):
        raise ValueError("n_max must be a positive integer")


def build_identity(n_max: int | None = None) -> ThetaMatrix:
    _check_n_max(n_max)
    return ThetaMatrix("identity", n_max, lambda n: np.ones(n))


def cesaro_numbers(phi: float, m_max: int) -> np.ndarray:
    """B^{(phi)}_0..B^{(phi)}_{m_max} via B_m = B_{m-1} (phi + m) / m."""
    out = np.empty(m_max + 1)
    out[0] = 1.0
    for m in range(1, m_max + 1):
        out[m] = out[m - 1] * (phi + m) / m
    return out


def build_cesaro(phi: float, n_max: int | None = None) -> ThetaMatrix:
    if not phi >= 0:
        raise ValueError(f"Cesaro order must be >= 0, got {phi}")
    _check_n_max(n_max)

    def row(n):
        b = cesaro_numbers(phi, n - 1)
        return b[::-1] / b[-1]

    return ThetaMatrix(f"cesaro(phi={phi:g})", n_max, row)


def build_riesz(nu: float, mu: float, n_max: int | None = None) -> ThetaMatrix:
    if not (nu >= 0 and mu >= 0):
        raise ValueError("Riesz parameters must be >= 0")
    _check_n_max(n_max)

    def row(n):
        ratio = np.arange(n) / n
        # 0**0 is 1 for both the inner and the outer power
        return np.power(1.0 - np.power(ratio, nu), mu)

    return ThetaMatrix(f"riesz(nu={nu:g},mu={mu:g})", n_max, row)


def build_vallee_poussin(s: float, n_max: int | None = None) -> ThetaMatrix:
    if not 0.0 < s < 1.0:
        raise ValueError(f"de la Vallee Poussin parameter must lie in (0, 1), got {s}")
    _check_n_max(n_max)

    def row(n):
        ratio = np.arange(n) / n
        return np.where(ratio <= s, 1.0, (ratio - 1.0) / (s - 1.0))

    return ThetaMatrix(f"vallee_poussin(s={s:g})", n_max, row)


def build_rogosinski(n_max: int | None = None) -> ThetaMatrix:
    _check_n_max(n_max)
    return ThetaMatrix("rogosinski", n_max, lambda n: np.cos(np.pi * np.arange(n) / (2.0 * n)))


def theta_from_rows(rows: Sequence[Sequence[float]], tag: str = "custom") -> ThetaMatrix:
    rows = [np.asarray(r, dtype=float) for r in rows]
    return ThetaMatrix(tag, len(rows), lambda n: rows[n - 1])


def theta_sum(theta: ThetaMatrix, coeffs, n: int, y, random_coeffs=None):
    """sum_{k<n} theta_{k,n} c_k p_k(y) with c_k = a_k or a_k A_k(omega).

    ``coeffs`` is an ExpansionCoefficients; pass a RandomCoefficients (or
    a plain array) as ``random_coeffs`` for the random series.
    """
    a = np.asarray(coeffs.values, dtype=float)
    if n < 1 or n > a.size:
        raise ValueError(f"order {n} exceeds the {a.size} available coefficients")
    c = a[:n]
    if random_coeffs is not None:
        rv = np.asarray(getattr(random_coeffs, "values", random_coeffs), dtype=float)
        if rv.size < n:
            raise ValueError(f"order {n} exceeds the {rv.size} random coefficients")
        c = c * rv[:n]
    basis = orthonormal_table(n - 1, coeffs.params, y)
    out = basis @ (theta.row(n) * c)
    return float(out) if np.ndim(out) == 0 else out


def first_difference(padded: np.ndarray) -> np.ndarray:
    """Delta theta_{k,n} = theta_{k+1,n} - theta_{k,n} for k = 0..n-1."""
    return padded[1:] - padded[:-1]


def second_difference(padded: np.ndarray) -> np.ndarray:
    """Delta^2 theta_{k-1,n} for k = 1..n-1, from the padded row."""
    d = first_difference(padded)
    return d[1:] - d[:-1]


def _clean_second_difference(theta: ThetaMatrix, n: int) -> np.ndarray:
    padded = theta.padded_row(n)
    d2 = second_difference(padded)
    band = _ZERO_BAND * max(1.0, float(np.max(np.abs(padded))))
    return np.where(np.abs(d2) <= band, 0.0, d2)


def check_theta_conditions(theta: ThetaMatrix, n_probe: Sequence[int] = DEFAULT_PROBES, fixed_k: int = 3) -> ConditionReport:
    """Evaluate T1-T5 and the classes (A), (B), (C) on the probe sizes.

    Asymptotic conditions get a heuristic verdict from their witness
    sequence; sign conditions are checked on every probe row.
    """
    probes = sorted(int(n) for n in n_probe)
    if not probes:
        raise ValueError("empty probe set")
    if probes[0] < 2:
        raise ValueError("probe sizes must be >= 2")
    report = ConditionReport(f"Theta conditions for {theta.method_tag}")

    t1 = [float(np.max(np.abs(1.0 - theta.row(n)[: min(fixed_k, n)]))) for n in probes]
    t2 = [n * abs(theta.entry(n - 1, n)) for n in probes]
    d2 = {n: _clean_second_difference(theta, n) for n in probes}
    t3 = [n * n * float(np.max(np.abs(d2[n]))) if d2[n].size else 0.0 for n in probes]

    row_sign_ok = {}
    t5_ok = {}
    for n in probes:
        signs = np.sign(d2[n])
        row_sign_ok[n] = bool(np.all(signs >= 0) or np.all(signs <= 0))
        t5_ok[n] = bool(np.all(signs == np.sign(theta.entry(n - 1, n))))

    T1 = vanishing_verdict(t1)
    T2 = bounded_verdict(t2)
    T3 = bounded_verdict(t3)
    T4 = all(row_sign_ok.values())
    T5 = all(t5_ok.values())
    report.add("T1", T1, dict(zip(probes, t1)), f"max_(k<{fixed_k}) |1 - theta_k,n| -> 0")
    report.add("T2", T2, dict(zip(probes, t2)), "n |theta_n-1,n| bounded")
    report.add("T3", T3, dict(zip(probes, t3)), "n^2 max |D2 theta| bounded")
    report.add("T4", T4, row_sign_ok, "D2 theta of constant sign per row")
    report.add("T5", T5, t5_ok, "sgn D2 theta = sgn theta_n-1,n")
    report.add("A", T1 and T2 and T3, "T1 & T2 & T3")
    report.add("B", T1 and T2 and T4, "T1 & T2 & T4")
    report.add("C", T1 and T5, "T1 & T5")
    return report


# ---------------------------------------------------------------------------
# Noerlund-type methods


def _as_array(seq, name: str) -> np.ndarray:
    arr = np.asarray(seq, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a nonempty sequence")
    return arr


@dataclass(frozen=True)
class NorlundWeights:
    p: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p", _as_array(self.p, "p"))

    @property
    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.p)

    def is_nonnegative_nonincreasing(self) -> bool:
        """Exact check of the hypothesis on the weights, no tolerance."""
        p = self.p
        return bool(np.all(p >= 0) and np.all(p[1:] <= p[:-1]))


@dataclass(frozen=True)
class GeneralizedNorlundWeights:
    q: np.ndarray
    r: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "q", _as_array(self.q, "q"))
        object.__setattr__(self, "r", _as_array(self.r, "r"))

    @property
    def convolution(self) -> np.ndarray:
        n = min(self.q.size, self.r.size)
        return np.convolve(self.q[:n], self.r[:n])[:n]


def _lower_convolution(kernel: np.ndarray, s: np.ndarray) -> np.ndarray:
    """out[n] = sum_{v<=n} kernel[n-v] s[v] along the first axis of ``s``."""
    n = s.shape[0]
    out = np.empty_like(s, dtype=float)
    for i in range(n):
        out[i] = np.tensordot(kernel[i::-1], s[: i + 1], axes=(0, 0))
    return out


def norlund_means(weights: NorlundWeights, s) -> np.ndarray:
    """h_n = P_n^{-1} sum_{v<=n} p_{n-v} s_v for n = 0..len(s)-1.

    ``s`` may carry trailing axes (e.g. one column per Monte Carlo path).
    """
    s = np.asarray(s, dtype=float)
    n = s.shape[0]
    if weights.p.size < n:
        raise ValueError(f"need {n} weights, have {weights.p.size}")
    P = weights.cumulative[:n]
    if np.any(P == 0):
        raise ZeroDivisionError(f"cumulative weight P_n vanishes at n={int(np.argmax(P == 0))}")
    out = _lower_convolution(weights.p[:n], s)
    return out / P.reshape((n,) + (1,) * (s.ndim - 1))


def generalized_norlund_means(weights: GeneralizedNorlundWeights, s) -> np.ndarray:
    """t_n = (q*r)_n^{-1} sum_{k<=n} q_{n-k} r_k s_k."""
    s = np.asarray(s, dtype=float)
    n = s.shape[0]
    if weights.q.size < n or weights.r.size < n:
        raise ValueError(f"need {n} entries of q and r")
    conv = weights.convolution[:n]
    if np.any(conv == 0):
        raise ZeroDivisionError(f"(q*r)_n vanishes at n={int(np.argmax(conv == 0))}")
    r = weights.r[:n].reshape((n,) + (1,) * (s.ndim - 1))
    out = _lower_convolution(weights.q[:n], r * s)
    return out / conv.reshape((n,) + (1,) * (s.ndim - 1))


# ---------------------------------------------------------------------------
# lower-triangular matrices


@dataclass(frozen=True)
class TriangularMatrix:
    """Lower-triangular b_{n,k}; ``row(n)`` holds b_{n,0}..b_{n,n}."""

    tag: str
    n_max: int | None
    _row: Callable[[int], np.ndarray] = field(repr=False, compare=False)

    def row(self, n: int) -> np.ndarray:
        if n < 0 or (self.n_max is not None and n > self.n_max):
            raise IndexError(f"row {n} outside 0..{self.n_max}")
        r = np.asarray(self._row(int(n)), dtype=float)
        if r.shape != (n + 1,):
            raise ValueError(f"row {n} of {self.tag} has {r.size} entries, expected {n + 1}")
        return r

    def tail_sum(self, n: int, tau: int) -> float:
        """D_{n,tau} = sum_{k=n-tau}^{n} b_{n,k}."""
        r = self.row(n)
        lo = max(n - int(tau), 0)
        return math.fsum(r[lo:])


def cesaro_triangular(n_max: int | None = None) -> TriangularMatrix:
    return TriangularMatrix("cesaro1", n_max, lambda n: np.full(n + 1, 1.0 / (n + 1)))


def identity_triangular(n_max: int | None = None) -> TriangularMatrix:
    return TriangularMatrix("identity", n_max, lambda n: np.eye(1, n + 1, n).ravel())


def triangular_from_rows(rows: Sequence[Sequence[float]], tag: str = "custom") -> TriangularMatrix:
    rows = [np.asarray(r, dtype=float) for r in rows]
    return TriangularMatrix(tag, len(rows) - 1, lambda n: rows[n])


def read_matrix_file(path) -> TriangularMatrix:
    """Parse a plain-text lower-triangular matrix: line n holds b_{n,0}..b_{n,n}."""
    rows = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        try:
            values = [float(tok) for tok in stripped.split()]
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: not a number ({exc})") from exc
        if len(values) != len(rows) + 1:
            raise ValueError(f"{path}:{lineno}: row {len(rows)} needs {len(rows) + 1} entries, found {len(values)}")
        rows.append(values)
    if not rows:
        raise ValueError(f"{path}: no matrix rows")
    return triangular_from_rows(rows, tag=f"file:{path}")


def triangular_means(matrix: TriangularMatrix, s) -> np.ndarray:
    """t_n = sum_{k<=n} b_{n,k} s_k for n = 0..len(s)-1."""
    s = np.asarray(s, dtype=float)
    n = s.shape[0]
    if matrix.n_max is not None and matrix.n_max < n - 1:
        raise ValueError(f"matrix has rows 0..{matrix.n_max}, sequence needs 0..{n - 1}")
    out = np.empty_like(s, dtype=float)
    for i in range(n):
        out[i] = np.tensordot(matrix.row(i), s[: i + 1], axes=(0, 0))
    return out


def silverman_toeplitz_check(matrix: TriangularMatrix, n_probe: Sequence[int] = DEFAULT_PROBES, fixed_k: int = 3) -> ConditionReport:
    """Regularity of a triangular method plus the structural hypotheses on b_{n,k}."""
    probes = sorted(int(n) for n in n_probe)
    if matrix.n_max is not None:
        probes = [n for n in probes if n <= matrix.n_max] or [matrix.n_max]
    rows = {n: matrix.row(n) for n in probes}
    report = ConditionReport(f"Silverman-Toeplitz check for {matrix.tag}")

    row_sum_gap = [abs(math.fsum(rows[n]) - 1.0) for n in probes]
    abs_sums = [math.fsum(np.abs(rows[n])) for n in probes]
    columns = [float(np.max(np.abs(rows[n][: min(fixed_k, n + 1)]))) for n in probes]
    report.add("row_sums_to_one", vanishing_verdict(row_sum_gap, floor=1e-9), dict(zip(probes, row_sum_gap)), "|sum_k b_n,k - 1| -> 0")
    report.add("bounded_abs_row_sums", bounded_verdict(abs_sums), {"M": max(abs_sums), "by_n": dict(zip(probes, abs_sums))}, "sup_n sum_k |b_n,k| <= M")
    report.add("columns_to_zero", vanishing_verdict(columns), dict(zip(probes, columns)), f"max_(k<{fixed_k}) |b_n,k| -> 0")
    positive = {n: bool(np.all(rows[n] > 0)) for n in probes}
    monotone = {n: bool(np.all(rows[n][1:] >= rows[n][:-1])) for n in probes}
    full_tail = {n: matrix.tail_sum(n, n) for n in probes}
    report.add("positive", all(positive.values()), positive, "b_n,k > 0")
    report.add("nondecreasing_in_k", all(monotone.values()), monotone, "b_n,k <= b_n,k+1")
    report.add("full_tail_sum_one", all(abs(v - 1.0) <= 1e-12 for v in full_tail.values()), full_tail, "D_n,n = 1")
    return report


# ---------------------------------------------------------------------------
# sequence presets used by method descriptors


def weight_sequence(name: str, length: int) -> np.ndarray:
    """Named weight sequences: one, harmonic, delta, inv_sqrt, linear, geom:<ratio>."""
    n = np.arange(length, dtype=float)
    if name == "one":
        return np.ones(length)
    if name == "harmonic":
        return 1.0 / (n + 1.0)
    if name == "delta":
        return (n == 0).astype(float)
    if name == "inv_sqrt":
        return 1.0 / np.sqrt(n + 1.0)
    if name == "linear":
        return n + 1.0
    if name.startswith("geom:"):
        return float(name[5:]) ** n
    raise ValueError(f"unknown weight sequence {name!r}")
