"""Declarative test functions on [0, inf).

A :class:`FunctionSpec` bundles a vectorized evaluator with its declared
growth class and, when cheaply available, analytic derivatives and an
analytic modulus of continuity on a window [0, upper].  The closed kind
set keeps every spec checkable: the series code refuses growth classes it
cannot bound, and the theorem checks know whether a modulus value is
exact or merely a sampled lower bound.

The text form understood by :func:`parse_function`:

    poly:c0,c1,...   polynomial with the given coefficients
    expneg:r         t -> exp(-r*t), r > 0
    abs:c            t -> |t - c|, c >= 0
    sqrt1p           t -> sqrt(1 + t)
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

__all__ = [
    "FunctionDSLError",
    "FunctionSpec",
    "GrowthClass",
    "abs_shift",
    "derivative_spec",
    "exp_decay",
    "parse_function",
    "polynomial",
    "sqrt1p",
]


class FunctionDSLError(ValueError):
    """Malformed function description; the message names the bad token."""


@dataclass(frozen=True)
class GrowthClass:
    kind: str  # "bounded" | "polynomial"
    degree: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("bounded", "polynomial"):
            raise ValueError(f"unknown growth class '{self.kind}'")
        if self.degree < 0:
            raise ValueError("growth degree must be non-negative")


@dataclass(frozen=True)
class FunctionSpec:
    """One test function plus the analytic structure attached to it.

    fn accepts scalars or numpy arrays.  d1/d2 are analytic derivative
    evaluators or None.  modulus, when present, maps (delta, upper) to the
    exact modulus of continuity on [0, upper].
    """

    kind: str
    label: str
    fn: Callable
    growth: GrowthClass
    d1: Optional[Callable] = None
    d2: Optional[Callable] = None
    modulus: Optional[Callable[[float, float], float]] = None

    def __call__(self, t):
        return self.fn(t)


def _fmt_num(v: float) -> str:
    return format(float(v), ".17g")


def polynomial(coefficients) -> FunctionSpec:
    """Polynomial sum_j c_j * t**j from ascending coefficients.

    Degree-at-most-one polynomials carry an exact modulus |c1| * delta;
    polynomials with non-negative higher coefficients are convex and
    increasing on [0, inf), where the modulus is attained at the right
    window edge.  Anything else gets no analytic modulus.
    """
    coeffs = tuple(float(c) for c in coefficients)
    if not coeffs:
        raise FunctionDSLError("polynomial needs at least one coefficient")
    degree = len(coeffs) - 1

    def fn(t):
        return np.polynomial.polynomial.polyval(t, coeffs)

    dcoef = np.polynomial.polynomial.polyder(coeffs) if degree >= 1 else np.zeros(1)
    ddcoef = np.polynomial.polynomial.polyder(coeffs, 2) if degree >= 2 else np.zeros(1)

    def d1(t):
        return np.polynomial.polynomial.polyval(t, dcoef)

    def d2(t):
        return np.polynomial.polynomial.polyval(t, ddcoef)

    modulus = None
    if degree <= 1:
        c1 = coeffs[1] if degree == 1 else 0.0

        def modulus(delta, upper, _c=abs(c1)):
            return _c * min(delta, upper)

    elif all(c >= 0 for c in coeffs[1:]):
        # Increasing and convex, so the largest increment over any step of
        # length delta sits at the right edge of the window.
        def modulus(delta, upper):
            step = min(delta, upper)
            return float(fn(upper) - fn(upper - step))

    label = "poly:" + ",".join(_fmt_num(c) for c in coeffs)
    return FunctionSpec(
        kind="polynomial",
        label=label,
        fn=fn,
        growth=GrowthClass("polynomial", degree),
        d1=d1,
        d2=d2,
        modulus=modulus,
    )


def exp_decay(rate: float) -> FunctionSpec:
    """t -> exp(-rate * t) with rate > 0; bounded, all derivatives known."""
    rate = float(rate)
    if rate <= 0:
        raise FunctionDSLError(f"expneg rate must be positive, got '{rate}'")

    def fn(t):
        return np.exp(-rate * np.asarray(t, dtype=float))

    def modulus(delta, upper):
        # Decreasing with steepest slope at 0: the supremal increment is
        # f(0) - f(min(delta, upper)).
        return -math.expm1(-rate * min(delta, upper))

    return FunctionSpec(
        kind="exp_decay",
        label=f"expneg:{_fmt_num(rate)}",
        fn=fn,
        growth=GrowthClass("bounded"),
        d1=lambda t: -rate * np.exp(-rate * np.asarray(t, dtype=float)),
        d2=lambda t: rate * rate * np.exp(-rate * np.asarray(t, dtype=float)),
        modulus=modulus,
    )


def abs_shift(center: float) -> FunctionSpec:
    """t -> |t - center| with center >= 0; Lipschitz-1, no derivative."""
    center = float(center)
    if center < 0:
        raise FunctionDSLError(f"abs center must be non-negative, got '{center}'")

    def fn(t):
        return np.abs(np.asarray(t, dtype=float) - center)

    def modulus(delta, upper):
        # Lipschitz-1 and attained on whichever side of the kink is long
        # enough; capped by the longest one-sided stretch in the window.
        step = min(delta, upper)
        return min(step, max(center, upper - center))

    return FunctionSpec(
        kind="abs_shift",
        label=f"abs:{_fmt_num(center)}",
        fn=fn,
        growth=GrowthClass("polynomial", 1),
        modulus=modulus,
    )


def sqrt1p() -> FunctionSpec:
    """t -> sqrt(1 + t); concave increasing, steepest at 0."""

    def fn(t):
        return np.sqrt(1.0 + np.asarray(t, dtype=float))

    def modulus(delta, upper):
        return math.sqrt(1.0 + min(delta, upper)) - 1.0

    return FunctionSpec(
        kind="sqrt1p",
        label="sqrt1p",
        fn=fn,
        growth=GrowthClass("polynomial", 1),
        d1=lambda t: 0.5 / np.sqrt(1.0 + np.asarray(t, dtype=float)),
        d2=lambda t: -0.25 * (1.0 + np.asarray(t, dtype=float)) ** -1.5,
        modulus=modulus,
    )


def derivative_spec(spec: FunctionSpec) -> Optional[FunctionSpec]:
    """FunctionSpec for the first derivative, or None when unavailable."""
    if spec.kind == "polynomial":
        coeffs = _poly_coeffs_from_label(spec.label)
        dcoef = np.polynomial.polynomial.polyder(coeffs) if len(coeffs) > 1 else [0.0]
        out = polynomial(dcoef)
        return dataclasses.replace(out, label=f"d1({spec.label})")
    if spec.kind == "exp_decay":
        rate = float(spec.label.split(":", 1)[1])

        def fn(t):
            return -rate * np.exp(-rate * np.asarray(t, dtype=float))

        def modulus(delta, upper):
            # |f'| = rate * exp(-rate t) is decreasing, largest gap at 0.
            return rate * -math.expm1(-rate * min(delta, upper))

        return FunctionSpec(
            kind="exp_decay_d1",
            label=f"d1({spec.label})",
            fn=fn,
            growth=GrowthClass("bounded"),
            d1=lambda t: rate * rate * np.exp(-rate * np.asarray(t, dtype=float)),
            d2=lambda t: -rate ** 3 * np.exp(-rate * np.asarray(t, dtype=float)),
            modulus=modulus,
        )
    if spec.kind == "sqrt1p":

        def fn(t):
            return 0.5 / np.sqrt(1.0 + np.asarray(t, dtype=float))

        def modulus(delta, upper):
            step = min(delta, upper)
            return 0.5 * (1.0 - 1.0 / math.sqrt(1.0 + step))

        return FunctionSpec(
            kind="sqrt1p_d1",
            label="d1(sqrt1p)",
            fn=fn,
            growth=GrowthClass("bounded"),
            d1=lambda t: -0.25 * (1.0 + np.asarray(t, dtype=float)) ** -1.5,
            modulus=modulus,
        )
    return None


def _poly_coeffs_from_label(label: str):
    return [float(tok) for tok in label.split(":", 1)[1].split(",")]


def parse_function(text: str) -> FunctionSpec:
    """Parse the small closed function DSL; errors name the bad token."""
    kind, _, rest = text.partition(":")
    if kind == "poly":
        if not rest:
            raise FunctionDSLError("poly needs coefficients, e.g. poly:0,1")
        coeffs = []
        for tok in rest.split(","):
            try:
                coeffs.append(float(tok))
            except ValueError:
                raise FunctionDSLError(f"bad poly coefficient '{tok}'") from None
        return polynomial(coeffs)
    if kind == "expneg":
        try:
            rate = float(rest)
        except ValueError:
            raise FunctionDSLError(f"bad expneg rate '{rest}'") from None
        return exp_decay(rate)
    if kind == "abs":
        try:
            center = float(rest)
        except ValueError:
            raise FunctionDSLError(f"bad abs center '{rest}'") from None
        return abs_shift(center)
    if kind == "sqrt1p":
        if rest:
            raise FunctionDSLError(f"sqrt1p takes no argument, got '{rest}'")
        return sqrt1p()
    raise FunctionDSLError(f"unknown function kind '{kind}'")
