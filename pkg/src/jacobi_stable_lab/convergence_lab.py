"""Monte Carlo evidence for summability in probability of random Fourier-Jacobi series.

Random series and target share one path per Monte Carlo replicate.  Both
are left-endpoint sums over the path grid, so the error of replicate j at
order n is

    sup mode    sum_i (s_n(t_i) - f(t_i)) rho^{(eta,tau)}(t_i) dX_i
    point mode  (h_n(f, 1) - A) sum_i rho^{(gamma,delta)}(t_i) dX_i

where s_n is the summed deterministic expansion (so that the random sum
is ``sum_k w_{k,n} a_k A_k(omega)``) and h_n(f, 1) is the summed series
at y = 1.  ``point_kernel = "literal"`` replaces the point-mode sum by
``sum_k w_{k,n} a_k A_k(omega) p_k(1)`` with A_k taken against
rho^{(gamma,delta)}.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import erfc
from statsmodels.stats.proportion import proportion_confint

from . import summation as sm
from .fourier_jacobi import TargetFunction, coefficients, integrand_matrix, target_from_descriptor
from .jacobi_core import JacobiParams, WeightParams, gauss_jacobi_rule, orthonormal_table, weight_eval
from .methods import SummationMethod, parse_method
from .stable_process import PathSampler, StableIndex, StablePath, sample_increment_matrix, uniform_grid

MIN_PATHS = 100
DYADIC_T = tuple(2.0 ** -j for j in range(2, 13))


class ConfigError(ValueError):
    """An experiment configuration violates a hard requirement."""


# ---------------------------------------------------------------------------
# parameter gates


@dataclass(frozen=True)
class ParameterGate:
    tag: str
    flags: dict
    comparison: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.flags.values())

    def to_text(self) -> str:
        lines = [f"parameter gate [{self.tag}]: {'pass' if self.passed else 'FAIL'}"]
        lines += [f"  {k}: {v}" for k, v in self.flags.items()]
        if self.comparison:
            lines.append("  deterministic-series regime (comparison only):")
            lines += [f"    {k}: {v}" for k, v in self.comparison.items()]
        return "\n".join(lines)


GATE_TAGS = ("theta", "norlund", "gennorlund", "triangular")


def parameter_gate(basis: JacobiParams, weight: WeightParams | None, theorem_tag: str) -> ParameterGate:
    """Inequality windows on (gamma, delta, eta, tau) for each family of results."""
    g, d = basis.gamma, basis.delta
    tag = theorem_tag.lower()
    if tag == "theta":
        if weight is None:
            raise ValueError("the Theta gate needs weight exponents")
        e, t = weight.eta, weight.tau
        flags = {
            "gamma, delta >= -1/2": g >= -0.5 and d >= -0.5,
            "eta, tau >= 0": e >= 0 and t >= 0,
            "gamma/2 - 1/4 < eta < gamma/2 + 3/4": g / 2 - 0.25 < e < g / 2 + 0.75,
            "delta/2 - 1/4 < tau < delta/2 + 3/4": d / 2 - 0.25 < t < d / 2 + 0.75,
        }
        return ParameterGate(tag, flags)
    if tag == "norlund":
        flags = {"0 <= gamma < 1/2": 0 <= g < 0.5, "delta >= 0": d >= 0}
        comparison = {"-1/2 <= gamma < 1/2": -0.5 <= g < 0.5, "delta > -1/2": d > -0.5}
        return ParameterGate(tag, flags, comparison)
    if tag == "gennorlund":
        flags = {"gamma >= 0": g >= 0, "delta - gamma > 1": d - g > 1, "delta + gamma > 0": d + g > 0}
        comparison = {"gamma > -1/2": g > -0.5, "delta - gamma > 1": d - g > 1, "delta + gamma >= -1": d + g >= -1}
        return ParameterGate(tag, flags, comparison)
    if tag == "triangular":
        flags = {"0 <= gamma <= 1/2": 0 <= g <= 0.5, "delta >= 0": d >= 0}
        comparison = {"-1/2 <= gamma <= 1/2": -0.5 <= g <= 0.5, "delta > -1/2": d > -0.5}
        return ParameterGate(tag, flags, comparison)
    raise ValueError(f"unknown gate tag {theorem_tag!r}; expected one of {GATE_TAGS}")


def method_scope(method: SummationMethod) -> dict:
    """Whether the method's own parameters sit inside the range covered by the results."""
    tag = method.theta.method_tag if method.theta is not None else method.kind
    if tag.startswith("cesaro"):
        phi = float(tag.split("=")[1].rstrip(")"))
        return {"Cesaro order phi >= 1": phi >= 1}
    if tag.startswith("riesz"):
        nu, mu = (float(part.split("=")[1]) for part in tag[6:-1].split(","))
        return {"Riesz nu, mu >= 1": nu >= 1 and mu >= 1}
    return {}


# ---------------------------------------------------------------------------
# targets


def target_integral(f, weight, path: StablePath, constant: float | None = None) -> float:
    """Discretized integral of f rho^{weight} (or constant * rho^{weight}) against the path."""
    left = path.grid[:-1]
    rho = weight_eval(weight, left)
    values = (np.full_like(left, constant) if constant is not None else np.asarray(f(left), dtype=float)) * rho
    if not np.all(np.isfinite(values)):
        raise ValueError("target integrand is not finite at every grid point")
    return float(np.cumsum(values * path.increments)[-1])


# ---------------------------------------------------------------------------
# experiment


@dataclass(frozen=True)
class ExperimentConfig:
    target: str = "abs"
    gamma: float = 0.0
    delta: float = 0.0
    eta: float = 0.0
    tau: float = 0.0
    method: str = "cesaro:phi=1"
    alpha: float = 2.0
    n_schedule: tuple = (8, 16, 32, 64)
    paths: int = 2000
    grid_size: int = 512
    epsilon: float = 0.1
    mode: str = "sup"
    seed: int = 0
    A: float | None = None
    point_kernel: str = "proof"

    def validate(self) -> None:
        sched = list(self.n_schedule)
        if not sched or any(int(n) != n or n < 1 for n in sched):
            raise ConfigError("n_schedule must be positive integers")
        if any(b <= a for a, b in zip(sched, sched[1:])):
            raise ConfigError("n_schedule must be strictly increasing")
        if int(self.paths) != self.paths or self.paths < MIN_PATHS:
            raise ConfigError(f"M >= {MIN_PATHS} required, got {self.paths}")
        if int(self.grid_size) != self.grid_size or self.grid_size < 2:
            raise ConfigError("grid_size must be an integer >= 2")
        if not self.epsilon > 0:
            raise ConfigError("epsilon must be positive")
        if self.mode not in ("sup", "point"):
            raise ConfigError(f"mode must be 'sup' or 'point', got {self.mode!r}")
        if self.point_kernel not in ("proof", "literal"):
            raise ConfigError("point_kernel must be 'proof' or 'literal'")
        try:
            StableIndex(float(self.alpha))
            JacobiParams(self.gamma, self.delta)
            WeightParams(self.eta, self.tau)
            parse_method(self.method)
            target_from_descriptor(self.target)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


def wilson_interval(count: int, total: int) -> tuple[float, float]:
    lo, hi = proportion_confint(count, total, alpha=0.05, method="wilson")
    # clamp float noise so the interval always contains the point estimate
    p = count / total
    return min(float(lo), p), max(float(hi), p)


@dataclass
class ConvergenceReport:
    config: ExperimentConfig
    orders: list
    exceed_counts: list
    p_hat: list
    wilson_lo: list
    wilson_hi: list
    target_estimates: np.ndarray
    gate: ParameterGate
    method_conditions: sm.ConditionReport
    extra_conditions: sm.ConditionReport | None = None
    caveats: list = field(default_factory=list)
    wall_clock_seconds: float = 0.0

    @property
    def paths(self) -> int:
        return self.config.paths

    def rows(self):
        for i, n in enumerate(self.orders):
            yield n, self.p_hat[i], self.wilson_lo[i], self.wilson_hi[i]

    def nonincreasing_up_to_overlap(self) -> bool:
        """P_hat never rises by more than the Wilson intervals of neighbours allow."""
        for i in range(1, len(self.orders)):
            if self.p_hat[i] > self.p_hat[i - 1] and self.wilson_lo[i] > self.wilson_hi[i - 1]:
                return False
        return True

    def to_csv(self) -> str:
        lines = ["n,p_hat,wilson_lo,wilson_hi,M,epsilon,mode"]
        for n, p, lo, hi in self.rows():
            lines.append(f"{n},{p!r},{lo!r},{hi!r},{self.config.paths},{self.config.epsilon!r},{self.config.mode}")
        return "\n".join(lines) + "\n"

    def gate_text(self) -> str:
        cfg = self.config
        parts = [
            f"target={cfg.target} gamma={cfg.gamma:g} delta={cfg.delta:g} eta={cfg.eta:g} tau={cfg.tau:g}",
            f"method={cfg.method} alpha={cfg.alpha:g} M={cfg.paths} G={cfg.grid_size} epsilon={cfg.epsilon:g} mode={cfg.mode} seed={cfg.seed}",
            self.gate.to_text(),
            self.method_conditions.to_text(),
        ]
        if self.extra_conditions is not None:
            parts.append(self.extra_conditions.to_text())
        if self.caveats:
            parts.append("caveats:\n" + "\n".join(f"  - {c}" for c in self.caveats))
        parts.append(f"non-increasing up to Wilson overlap: {self.nonincreasing_up_to_overlap()}")
        parts.append(f"wall clock: {self.wall_clock_seconds:.2f} s")
        return "\n\n".join(parts) + "\n"

    def to_svg(self, width: int = 480, height: int = 320) -> str:
        """Line plot of P_hat (with Wilson band) against log2 n."""
        pad = 48
        xs = [math.log2(n) for n in self.orders]
        x0, x1 = min(xs), max(xs)
        span = (x1 - x0) or 1.0

        def px(x):
            return pad + (x - x0) / span * (width - 2 * pad)

        def py(p):
            return height - pad - p * (height - 2 * pad)

        def poly(values, style):
            pts = " ".join(f"{px(x):.2f},{py(v):.2f}" for x, v in zip(xs, values))
            return f'<polyline fill="none" {style} points="{pts}"/>'

        axis = (
            f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>'
            f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>'
        )
        ticks = "".join(
            f'<text x="{px(x):.2f}" y="{height - pad + 16}" font-size="10" text-anchor="middle">{n}</text>'
            for x, n in zip(xs, self.orders)
        )
        ticks += "".join(
            f'<text x="{pad - 6}" y="{py(p) + 3:.2f}" font-size="10" text-anchor="end">{p:g}</text>' for p in (0.0, 0.5, 1.0)
        )
        body = (
            axis
            + ticks
            + poly(self.wilson_lo, 'stroke="gray" stroke-dasharray="4,3"')
            + poly(self.wilson_hi, 'stroke="gray" stroke-dasharray="4,3"')
            + poly(self.p_hat, 'stroke="black" stroke-width="2"')
        )
        return (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">'
            f'<text x="{width / 2}" y="20" font-size="12" text-anchor="middle">P(|error| &gt; {self.config.epsilon:g}) vs n</text>'
            f"{body}</svg>\n"
        )


def _integration_weight(config: ExperimentConfig) -> WeightParams:
    if config.mode == "sup":
        return WeightParams(config.eta, config.tau)
    return WeightParams(config.gamma, config.delta)


def run_experiment(
    config: ExperimentConfig,
    sampler: PathSampler | None = None,
    threads: int = 1,
    return_errors: bool = False,
):
    """Estimate P(|summed random series - target| > epsilon) for every order in the schedule."""
    config.validate()
    started = time.perf_counter()
    f = target_from_descriptor(config.target)
    basis = JacobiParams(config.gamma, config.delta)
    weight = _integration_weight(config)
    if not weight.is_continuous:
        raise ConfigError("stochastic integrands need nonnegative weight exponents")
    method = parse_method(config.method)
    orders = [int(n) for n in config.n_schedule]
    n_terms = max(method.terms_needed(n) for n in orders)
    coeffs = coefficients(f, n_terms - 1, basis)
    a = np.asarray(coeffs.values)

    grid = uniform_grid(config.grid_size)
    left = grid[:-1]
    rho = weight_eval(weight, left)
    increments = sample_increment_matrix(config.alpha, config.grid_size, config.seed, config.paths, sampler, threads)

    caveats = []
    if config.mode == "sup":
        phi = integrand_matrix(grid, n_terms - 1, basis, weight)
        random_coeffs = increments @ phi
        series = method.apply((a * random_coeffs).T, orders)
        fvals = np.asarray(f(left), dtype=float)
        if not np.all(np.isfinite(fvals)):
            raise ValueError("target is not finite on the path grid")
        target = increments @ (fvals * rho)
        caveats.append("series and target are integrals in t only, so the error is the same at every y")
        A = None
    else:
        A = float(f(np.array(1.0))) if config.A is None else float(config.A)
        p_at_one = orthonormal_table(n_terms - 1, basis, 1.0)
        mass = increments @ rho
        if config.point_kernel == "literal":
            phi = integrand_matrix(grid, n_terms - 1, basis, weight)
            series = method.apply((a * p_at_one * (increments @ phi)).T, orders)
        else:
            summed = method.apply(a * p_at_one, orders)
            series = np.outer(summed, mass)
        target = A * mass
        caveats.append(f"point mode at y = 1 with A = {A:g}, kernel = {config.point_kernel}")
    if config.alpha < 2:
        caveats.append("alpha < 2: second moments do not exist, variance-based oracles are disabled")

    errors = np.abs(series - target[None, :])
    counts = [int(c) for c in np.count_nonzero(errors > config.epsilon, axis=1)]
    M = config.paths
    intervals = [wilson_interval(c, M) for c in counts]

    gate_tag = "theta" if (config.mode == "sup" or method.kind == "theta") else method.kind
    gate = parameter_gate(basis, WeightParams(config.eta, config.tau), gate_tag)
    gate = ParameterGate(gate.tag, {**gate.flags, **method_scope(method)}, gate.comparison)
    method_report = method.structural_report()
    extra = None
    if config.mode == "point" and method.kind != "theta":
        extra = theorem_condition_report(method, f, basis, A)

    report = ConvergenceReport(
        config=config,
        orders=orders,
        exceed_counts=counts,
        p_hat=[c / M for c in counts],
        wilson_lo=[lo for lo, _ in intervals],
        wilson_hi=[hi for _, hi in intervals],
        target_estimates=target,
        gate=gate,
        method_conditions=method_report,
        extra_conditions=extra,
        caveats=caveats,
        wall_clock_seconds=time.perf_counter() - started,
    )
    if return_errors:
        return report, errors
    return report


# ---------------------------------------------------------------------------
# integrals used by the hypothesis checks


def _endpoint_integral(f_abs: Callable, lower: float, upper: float, exponent: float, order: int) -> float:
    """Integral over [lower, upper] of (x - lower)^exponent f_abs(x) by Gauss-Jacobi."""
    half = 0.5 * (upper - lower)
    rule = gauss_jacobi_rule(order, JacobiParams(0.0, exponent))
    x = lower + half * (1.0 + rule.nodes)
    return half ** (exponent + 1.0) * rule.integrate(f_abs(x))


def antipole_integral(f, exponent: float, b: float = 0.0, order: int = 64) -> sm.Condition:
    """Finiteness of the integral over [-1, b] of (1 + x)^exponent |f(x)|.

    Divergence is declared when the exponent is <= -1 or when doubling the
    rule size moves the estimate by more than 0.1 % (growth near x = -1).
    """
    if exponent <= -1.0:
        return sm.Condition("antipole_integral", False, math.inf, f"exponent {exponent:g} <= -1")
    f_abs = lambda x: np.abs(np.asarray(f(x), dtype=float))  # noqa: E731
    coarse = _endpoint_integral(f_abs, -1.0, b, exponent, order)
    fine = _endpoint_integral(f_abs, -1.0, b, exponent, 2 * order)
    finite = math.isfinite(fine) and abs(fine - coarse) <= 1e-3 * max(1.0, abs(fine))
    return sm.Condition("antipole_integral", finite, {"m": coarse, "2m": fine}, f"int_-1^{b:g} (1+x)^{exponent:g} |f|")


def _interval_integral(g: Callable, lo: float, hi: float, order: int = 64) -> float:
    rule = gauss_jacobi_rule(order, JacobiParams(0.0, 0.0))
    half = 0.5 * (hi - lo)
    return half * rule.integrate(g(lo + half * (1.0 + rule.nodes)))


def endpoint_rate_witness(f, A: float, rhs: Callable[[float], float], literal_bounds: bool) -> dict:
    """int |f(u) - A| du over [1 - t, t] (as written) or [1 - t, 1], divided by rhs(t)."""
    dev = lambda u: np.abs(np.asarray(f(u), dtype=float) - A)  # noqa: E731
    out = {}
    for t in DYADIC_T:
        if literal_bounds:
            value = abs(_interval_integral(dev, min(t, 1 - t), max(t, 1 - t)))
        else:
            value = _interval_integral(dev, 1.0 - t, 1.0)
        out[t] = value / rhs(t)
    return out


# ---------------------------------------------------------------------------
# hypothesis reports for the partial-sum methods at y = 1


def norlund_condition_report(p, f, basis: JacobiParams, A: float | None = None, b: float = 0.0, n_probe=sm.DEFAULT_PROBES) -> sm.ConditionReport:
    """Hypotheses on (N, p_n) and f for summability at y = 1."""
    probes = sorted(int(n) for n in n_probe)
    weights = p if isinstance(p, sm.NorlundWeights) else sm.NorlundWeights(sm.weight_sequence(p, probes[-1] + 1))
    P = weights.cumulative
    report = sm.ConditionReport("Noerlund hypotheses at y = 1")
    report.add("nonnegative_nonincreasing", weights.is_nonnegative_nonincreasing(), weights.p[:4].tolist(), "exact comparison")
    growth = [P[n] for n in probes]
    inc = np.diff(growth)
    diverging = bool(len(inc) >= 2 and inc[-1] > 0 and inc[-1] >= 0.75 * inc[-2])
    report.add("weights_diverge", diverging, dict(zip(probes, growth)), "P_n -> infinity")
    report.add("ratio_condition", None, "undefined in source", "involves a function never defined; not checked")
    n = np.arange(probes[-1] + 1, dtype=float)
    partial = np.cumsum(n ** (basis.gamma + 0.5) / P[: probes[-1] + 1])
    witness = [float(partial[k]) for k in probes]
    report.add("weighted_reciprocal_series", sm.bounded_verdict(witness), dict(zip(probes, witness)), "sum n^(gamma+1/2) / P_n < infinity")
    cond = antipole_integral(f, basis.delta / 2 - 0.75, b)
    report.conditions.append(cond)
    gate = parameter_gate(basis, None, "norlund")
    report.add("parameter_regime", gate.passed, gate.flags)
    return report


def generalized_norlund_condition_report(q, r, f, basis: JacobiParams, A: float | None = None, b: float = 0.0,
                                         n_probe=sm.DEFAULT_PROBES, literal_bounds: bool = True) -> sm.ConditionReport:
    probes = sorted(int(n) for n in n_probe)
    length = probes[-1] + 1
    qv = q if isinstance(q, np.ndarray) else sm.weight_sequence(q, length)
    rv = r if isinstance(r, np.ndarray) else sm.weight_sequence(r, length)
    conv = sm.GeneralizedNorlundWeights(qv, rv).convolution
    A = float(f(np.array(1.0))) if A is None else A
    g = basis.gamma + 0.5
    report = sm.ConditionReport("generalized Noerlund hypotheses at y = 1")
    report.add("nonnegative", bool(np.all(qv >= 0) and np.all(rv >= 0)), {"q": qv[:3].tolist(), "r": rv[:3].tolist()})
    k = np.arange(length, dtype=float)
    terms = np.zeros(length)
    terms[2:] = conv[2:] / (k[2:] ** g * np.log(k[2:]))
    lhs = np.cumsum(terms)
    witness = [float(lhs[n] / (conv[n] / n ** g)) for n in probes]
    report.add("convolution_growth", sm.bounded_verdict(witness), dict(zip(probes, witness)),
               "sum_k (q*r)_k / (k^(gamma+1/2) log k) = O((q*r)_n / n^(gamma+1/2))")
    rate = endpoint_rate_witness(f, A, lambda t: t / math.log(1.0 / t), literal_bounds)
    ordered = [rate[t] for t in DYADIC_T]
    bounds = "[1-t, t] as written" if literal_bounds else "[1-t, 1]"
    report.add("endpoint_rate", sm.bounded_verdict(ordered), rate, f"int over {bounds} |f - A| = O(t / log(1/t)), A={A:g}")
    cond = antipole_integral(f, (basis.delta - basis.gamma - 1.0) / 2.0, b)
    report.conditions.append(cond)
    gate = parameter_gate(basis, None, "gennorlund")
    report.add("parameter_regime", gate.passed, gate.flags)
    return report


def triangular_condition_report(matrix: sm.TriangularMatrix, f, basis: JacobiParams, A: float | None = None, beta: float = 1.0,
                                xi: Callable[[float], float] = lambda x: 1.0, a_start: int = 2,
                                n_probe=sm.DEFAULT_PROBES, phi: float | None = None) -> sm.ConditionReport:
    """Regularity, structure and rate hypotheses on a (T) method and f at y = 1.

    ``beta`` (in (0, pi)) fixes the tail length [1/beta] in the tail-mass
    condition; ``xi`` and ``a_start`` parametrize the tail-sum rate.  The
    tail length may also be given as [1/phi] through ``phi`` (in (0, pi]);
    the two are kept independent and both are reported when ``phi`` is set.
    """
    if not 0 < beta < math.pi:
        raise ValueError("beta must lie in (0, pi)")
    if phi is not None and not 0 < phi <= math.pi:
        raise ValueError("phi must lie in (0, pi]")
    probes = sorted(int(n) for n in n_probe)
    if matrix.n_max is not None:
        probes = [n for n in probes if n <= matrix.n_max] or [matrix.n_max]
    A = float(f(np.array(1.0))) if A is None else A
    g = basis.gamma
    report = sm.silverman_toeplitz_check(matrix, probes)
    report.title = f"triangular hypotheses at y = 1 for {matrix.tag}"
    tau = int(1.0 / beta)
    decay = [n ** (g + 0.5) * matrix.tail_sum(n, tau) for n in probes]
    report.add("tail_mass_decay", sm.vanishing_verdict(decay), dict(zip(probes, decay)), f"n^(gamma+1/2) D_n,{tau} -> 0")
    if phi is not None:
        tau_phi = int(1.0 / phi)
        decay_phi = [n ** (g + 0.5) * matrix.tail_sum(n, tau_phi) for n in probes]
        report.add("tail_mass_decay_phi", sm.vanishing_verdict(decay_phi), dict(zip(probes, decay_phi)),
                   f"n^(gamma+1/2) D_n,{tau_phi} -> 0 with tau = [1/phi]")
    tail = []
    for n in probes:
        ks = range(max(a_start, 2), n + 1)
        total = math.fsum(matrix.tail_sum(n, k) / (k ** ((2 * g + 3) / 2) * xi(k) * math.log(k)) for k in ks)
        tail.append(total * n ** ((2 * g + 1) / 2))
    report.add("tail_sum_rate", sm.bounded_verdict(tail), dict(zip(probes, tail)), "sum_k D_n,k / (k^((2g+3)/2) xi(k) log k) = O(n^-(2g+1)/2)")
    rate = endpoint_rate_witness(f, A, lambda t: t / (xi(1.0 / t) * math.log(1.0 / t)), literal_bounds=False)
    report.add("endpoint_rate", sm.vanishing_verdict([rate[t] for t in DYADIC_T]), rate, f"int_(1-t)^1 |f - A| = o(t / (xi log(1/t))), A={A:g}")
    expo = basis.delta - 0.5
    if expo <= -1.0:
        report.add("antipole_vanishing", False, math.inf, "t^(delta-1/2) not integrable at 0")
    else:
        dev = lambda t: np.abs(np.asarray(f(-np.cos(t)), dtype=float) - A)  # noqa: E731
        vals = [_endpoint_integral(dev, 0.0, 1.0 / n, expo, 64) for n in probes]
        report.add("antipole_vanishing", sm.vanishing_verdict(vals), dict(zip(probes, vals)), "int_0^(1/n) t^(delta-1/2) |f(-cos t) - A| -> 0")
    gate = parameter_gate(basis, None, "triangular")
    report.add("parameter_regime", gate.passed, gate.flags)
    return report


def theorem_condition_report(method: SummationMethod, f, basis: JacobiParams, A: float | None) -> sm.ConditionReport:
    if method.kind == "norlund":
        return norlund_condition_report(method.p, f, basis, A)
    if method.kind == "gennorlund":
        return generalized_norlund_condition_report(method.q, method.r, f, basis, A)
    if method.kind == "triangular":
        return triangular_condition_report(method.matrix, f, basis, A)
    raise ValueError("Theta methods have no point-mode hypothesis report")


# ---------------------------------------------------------------------------
# tail scaling of the stochastic integral


def lemma_tail_scaling_check(
    g,
    alpha: float,
    epsilons: Sequence[float],
    M: int = 10_000,
    grid_size: int = 256,
    seed: int = 0,
    max_ratio: float = 1.2,
) -> sm.ConditionReport:
    """Check that eps^alpha P(|int g dX| > eps) / int |g|^alpha stays flat over ``epsilons``.

    The scale integral uses the same left-endpoint grid as the stochastic
    integral, so it is exactly the scale^alpha of the discretized integral.
    The verdict is "consistent" when last/first witness <= ``max_ratio``.
    Closed-form tails are reported for alpha = 1 and alpha = 2.
    """
    eps = [float(e) for e in epsilons]
    if not eps or any(e <= 0 for e in eps) or any(b <= a for a, b in zip(eps, eps[1:])):
        raise ValueError("epsilons must be positive and increasing")
    if M < 10_000:
        raise ValueError("M >= 10^4 required")
    index = StableIndex(float(alpha))
    grid = uniform_grid(grid_size)
    left = grid[:-1]
    gvals = np.broadcast_to(np.asarray(g(left), dtype=float) if callable(g) else np.asarray(g, dtype=float), left.shape)
    dt = 2.0 / grid_size
    norm = float(np.sum(np.abs(gvals) ** index.alpha) * dt)
    integrals = sample_increment_matrix(index, grid_size, seed, M) @ gvals
    p_hat = [float(np.mean(np.abs(integrals) > e)) for e in eps]
    witness = [0.0 if norm == 0 else e ** index.alpha * p / norm for e, p in zip(eps, p_hat)]
    report = sm.ConditionReport(f"tail scaling, alpha={index.alpha:g}")
    if witness[0] == 0.0:
        consistent = all(w == 0.0 for w in witness)
        ratio = 0.0
    else:
        ratio = witness[-1] / witness[0]
        consistent = ratio <= max_ratio
    report.add("scaling", consistent, {"eps": eps, "witness": witness, "last/first": ratio, "sup": max(witness)},
               "eps^alpha P(|I| > eps) / int |g|^alpha; eps used in place of eps'")
    report.add("empirical_tail", None, dict(zip(eps, p_hat)))
    sigma = norm ** (1.0 / index.alpha)
    if sigma > 0 and index.alpha == 2.0:
        exact = [float(erfc(e / (2.0 * sigma))) for e in eps]
        report.add("closed_form_tail", None, dict(zip(eps, exact)), "Gaussian, variance 2 * int g^2")
    elif sigma > 0 and index.alpha == 1.0:
        exact = [1.0 - 2.0 / math.pi * math.atan(e / sigma) for e in eps]
        report.add("closed_form_tail", None, dict(zip(eps, exact)), f"Cauchy with scale {sigma:g}")
    return report


# ---------------------------------------------------------------------------
# deterministic ingredient


def deterministic_convergence_probe(f, basis: JacobiParams, weight: WeightParams, method, n_schedule: Sequence[int],
                                    y_points: int = 201) -> tuple[list, ParameterGate]:
    """Weighted sup-norm error max_y |rho^{(eta,tau)}(y) (summed_n(f, y) - f(y))| on a uniform y-grid."""
    if isinstance(method, str):
        method = parse_method(method)
    if isinstance(f, str):
        f = target_from_descriptor(f)
    orders = [int(n) for n in n_schedule]
    n_terms = max(method.terms_needed(n) for n in orders)
    coeffs = coefficients(f, n_terms - 1, basis)
    y = np.linspace(-1.0, 1.0, y_points)
    basis_vals = orthonormal_table(n_terms - 1, basis, y)
    terms = (basis_vals * np.asarray(coeffs.values)).T
    summed = method.apply(terms, orders)
    rho = weight_eval(weight, y)
    fy = np.asarray(f(y), dtype=float)
    table = [(n, float(np.max(np.abs(rho * (summed[i] - fy))))) for i, n in enumerate(orders)]
    return table, parameter_gate(basis, weight, "theta")
