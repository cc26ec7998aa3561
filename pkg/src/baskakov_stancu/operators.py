"""Truncated-series evaluation of the operators.

The unshifted form sums W_{n,k}(x) * f(k/n); the shifted form moves the
nodes to (k + alpha)/(n + beta).  Summation is ascending in k and the
final value is the exact (correctly rounded) sum of the retained terms,
so results are bit-deterministic and independent of internal chunking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .basis import BLOCK, OperatorParams, TruncationPolicy, WeightSeries
from .functions import FunctionSpec

__all__ = [
    "EvalResult",
    "NonConvergenceError",
    "apply",
    "apply_centered",
    "apply_grid",
    "apply_mihesan",
    "series_sum",
]


@dataclass(frozen=True)
class EvalResult:
    """Outcome of one truncated series evaluation.

    mass_covered is the weight mass of the retained prefix, clamped into
    [0, 1]; truncation_flag marks evaluations that hit k_max before the
    stopping rule fired.
    """

    value: float
    terms_used: int
    mass_covered: float
    truncation_flag: bool


class NonConvergenceError(RuntimeError):
    """k_max was reached while the weight mass was still short.

    Carries the partial :class:`EvalResult` in ``result``.
    """

    def __init__(self, message: str, result: EvalResult):
        super().__init__(message)
        self.result = result


def series_sum(
    n: int,
    a: float,
    alpha: float,
    beta: float,
    g: Callable[[np.ndarray, np.ndarray], np.ndarray],
    x: float,
    policy: TruncationPolicy,
) -> EvalResult:
    """Sum W_{n,k}(x) * g(k, node_k) under the truncation policy.

    ``g`` receives the index array and the node array (k + alpha)/(n + beta)
    and must return the integrand values; this indirection lets moment
    oracles evaluate centered monomials without cancellation.
    """
    series = WeightSeries(n, a, x)
    denom = float(n) + float(beta)
    m = policy.consecutive_small
    w_parts: list[np.ndarray] = []
    t_parts: list[np.ndarray] = []
    mass_run = 0.0
    acc_run = 0.0
    run_carry = 0
    stop_k = None

    k0 = 0
    while k0 < policy.k_max and stop_k is None:
        k1 = min(k0 + BLOCK, policy.k_max)
        weights = series.weights_block(k0, k1)
        ks = np.arange(k0, k1, dtype=float)
        nodes = (ks + alpha) / denom
        terms = weights * np.asarray(g(ks, nodes), dtype=float)

        prefix_mass = mass_run + np.cumsum(weights)
        prefix_acc = acc_run + np.cumsum(terms)
        small = np.abs(terms) < policy.term_epsilon * (1.0 + np.abs(prefix_acc))
        idx = np.arange(terms.size)
        # Length of the trailing all-small run ending at each index,
        # continuing run_carry from the previous chunk.
        last_big = np.maximum.accumulate(np.where(~small, idx, -run_carry - 1))
        runlen = idx - last_big
        ok = (prefix_mass >= 1.0 - policy.mass_epsilon) & (runlen >= m)
        if ok.any():
            j = int(np.argmax(ok))
            stop_k = k0 + j
            weights = weights[: j + 1]
            terms = terms[: j + 1]
        w_parts.append(weights)
        t_parts.append(terms)
        mass_run = float(prefix_mass[-1]) if stop_k is None else 0.0
        acc_run = float(prefix_acc[-1]) if stop_k is None else 0.0
        run_carry = int(runlen[-1]) if stop_k is None else 0
        k0 = k1

    value = math.fsum(np.concatenate(t_parts))
    mass = min(math.fsum(np.concatenate(w_parts)), 1.0)
    truncated = stop_k is None
    terms_used = policy.k_max if truncated else stop_k + 1
    result = EvalResult(
        value=value,
        terms_used=terms_used,
        mass_covered=mass,
        truncation_flag=truncated,
    )
    if truncated and mass < 1.0 - policy.mass_epsilon:
        raise NonConvergenceError(
            f"series not converged at k_max={policy.k_max}: "
            f"mass_covered={mass:.17g}",
            result,
        )
    return result


def _check_growth(f: FunctionSpec) -> None:
    if f.growth.kind not in ("bounded", "polynomial"):
        raise ValueError(
            f"refusing integrand with growth class '{f.growth.kind}'; "
            "declare bounded or polynomial growth"
        )


def apply(
    params: OperatorParams,
    f: FunctionSpec,
    x: float,
    policy: TruncationPolicy | None = None,
) -> EvalResult:
    """Shifted-node operator value sum_k W_{n,k}(x) * f((k+alpha)/(n+beta))."""
    _check_growth(f)
    policy = policy or TruncationPolicy()
    return series_sum(
        params.n, params.a, params.alpha, params.beta,
        lambda _k, t: f(t), x, policy,
    )


def apply_mihesan(
    n: int,
    a: float,
    f: FunctionSpec,
    x: float,
    policy: TruncationPolicy | None = None,
) -> EvalResult:
    """Unshifted operator value sum_k W_{n,k}(x) * f(k/n)."""
    _check_growth(f)
    policy = policy or TruncationPolicy()
    return series_sum(int(n), float(a), 0.0, 0.0, lambda _k, t: f(t), x, policy)


def apply_centered(
    params: OperatorParams,
    f: FunctionSpec,
    x: float,
    policy: TruncationPolicy | None = None,
) -> EvalResult:
    """Approximation error sum_k W_{n,k}(x) * (f(node_k) - f(x)).

    Numerically this is the quantity of interest for convergence studies:
    measuring L(f) and subtracting f(x) afterwards loses all significant
    digits once the error is small, while the centered series keeps full
    relative accuracy.
    """
    _check_growth(f)
    policy = policy or TruncationPolicy()
    fx = float(f(x))
    return series_sum(
        params.n, params.a, params.alpha, params.beta,
        lambda _k, t: f(t) - fx, x, policy,
    )


def apply_grid(
    params: OperatorParams,
    f: FunctionSpec,
    xs: Sequence[float],
    policy: TruncationPolicy | None = None,
) -> list[EvalResult]:
    """Element-wise :func:`apply` over xs, order preserved.

    Non-convergence at one point does not abort the rest; the partial
    result (flag set, mass short) is placed at that position.
    """
    if len(xs) == 0:
        raise ValueError("xs must be non-empty")
    out: list[EvalResult] = []
    for x in xs:
        try:
            out.append(apply(params, f, x, policy))
        except NonConvergenceError as err:
            out.append(err.result)
    return out
