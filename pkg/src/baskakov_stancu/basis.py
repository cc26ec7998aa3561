"""Weight basis for the generalized Baskakov operator family.

The weight attached to index k at the point x >= 0 is

    W_{n,k}(x) = exp(-a*u) * p_k(n, a) / k! * x**k / (1+x)**(n+k),

where u = x/(1+x) and p_k(n, a) = sum_{i=0}^{k} C(k, i) * (n)_i * a**(k-i)
with (n)_i the rising factorial.  Forming p_k(n, a) and k! separately
overflows long before the weights themselves become interesting, so the
stream of weights is produced through an equivalent convolution: W_{.,k}
is the distribution of I + J where I carries the classical weights

    b_{n,i}(x) = C(n+i-1, i) * x**i / (1+x)**(n+i)

and J is Poisson with intensity a*u.  Every factor in that route stays on
probability scale, which keeps the computation overflow-free for any k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BLOCK",
    "OperatorParams",
    "TruncationPolicy",
    "WeightSeries",
    "basis_weight",
    "basis_weight_direct",
    "log_p_poly",
    "log_pochhammer",
    "p_poly",
    "pochhammer",
    "weight_prefix_mass",
]

# Weights are produced in fixed-size chunks; the chunk size never affects
# the values (each chunk continues the same multiplicative recurrence), it
# only bounds temporary allocations.
BLOCK = 4096

_POISSON_TAIL = 1e-22


@dataclass(frozen=True)
class OperatorParams:
    """Parameter tuple (n, a, alpha, beta) identifying one operator.

    n is the series index, a tilts the weights through the exp(-a*x/(1+x))
    factor, and (alpha, beta) shift the evaluation nodes from k/n to
    (k + alpha)/(n + beta).  Admissibility: n >= 1, a >= 0 and
    0 <= alpha <= beta.
    """

    n: int
    a: float = 0.0
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("n must be a positive integer")
        if self.a < 0:
            raise ValueError("a must be non-negative")
        if self.alpha < 0:
            raise ValueError("alpha must be non-negative")
        if self.alpha > self.beta:
            raise ValueError("alpha must not exceed beta")


@dataclass(frozen=True)
class TruncationPolicy:
    """Stopping rule for the ascending-k series.

    Summation stops at the first index where the accumulated weight mass
    is at least 1 - mass_epsilon AND the last `consecutive_small` terms
    are all below term_epsilon * (1 + |accumulated value|).  The mass
    condition alone is unsafe for growing integrands, the term condition
    alone is unsafe for heavy plateaus, hence both.  k_max is a hard cap;
    hitting it sets the truncation flag on the result.
    """

    mass_epsilon: float = 1e-14
    term_epsilon: float = 1e-16
    consecutive_small: int = 5
    k_max: int = 1_000_000

    def __post_init__(self) -> None:
        if not 0.0 < self.mass_epsilon < 1.0:
            raise ValueError("mass_epsilon must lie in (0, 1)")
        if self.term_epsilon <= 0.0:
            raise ValueError("term_epsilon must be positive")
        if self.consecutive_small < 1:
            raise ValueError("consecutive_small must be a positive integer")
        if self.k_max < 1:
            raise ValueError("k_max must be a positive integer")


def pochhammer(n: int, i: int) -> float:
    """Rising factorial (n)_i = n * (n+1) * ... * (n+i-1), with (n)_0 = 1.

    Exact (integer arithmetic) whenever the value is representable as a
    float; falls back to the log-space route, which saturates at inf for
    values beyond float range.
    """
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    if int(i) != i or i < 0:
        raise ValueError("i must be a non-negative integer")
    n, i = int(n), int(i)
    if i == 0:
        return 1.0
    try:
        return float(math.prod(range(n, n + i)))
    except OverflowError:
        try:
            return math.exp(log_pochhammer(n, i))
        except OverflowError:
            return math.inf


def log_pochhammer(n: int, i: int) -> float:
    """log of the rising factorial, via log-gamma."""
    if i == 0:
        return 0.0
    return math.lgamma(n + i) - math.lgamma(n)


def _log_comb(k: int, i: int) -> float:
    return math.lgamma(k + 1) - math.lgamma(i + 1) - math.lgamma(k - i + 1)


def _logsumexp(values) -> float:
    top = max(values)
    if top == -math.inf:
        return -math.inf
    return top + math.log(math.fsum(math.exp(v - top) for v in values))


def p_poly(k: int, n: int, a: float) -> float:
    """Weight polynomial p_k(n, a) = sum_{i=0}^{k} C(k, i) * (n)_i * a**(k-i).

    p_k(n, 0) = (n)_k.  All terms are non-negative, so the direct sum is
    well conditioned; it overflows for large k, in which case callers
    should work with :func:`log_p_poly` instead.
    """
    if int(k) != k or k < 0:
        raise ValueError("k must be a non-negative integer")
    k = int(k)
    if a < 0:
        raise ValueError("a must be non-negative")
    if a == 0:
        return pochhammer(n, k)
    try:
        return math.fsum(
            math.comb(k, i) * math.prod(range(n, n + i)) * a ** (k - i)
            for i in range(k + 1)
        )
    except OverflowError:
        return math.exp(log_p_poly(k, n, a))


def log_p_poly(k: int, n: int, a: float) -> float:
    """log p_k(n, a), summed in log space for overflow safety."""
    if int(k) != k or k < 0:
        raise ValueError("k must be a non-negative integer")
    k = int(k)
    if a < 0:
        raise ValueError("a must be non-negative")
    if a == 0:
        return log_pochhammer(n, k)
    loga = math.log(a)
    return _logsumexp(
        [
            _log_comb(k, i) + log_pochhammer(n, i) + (k - i) * loga
            for i in range(k + 1)
        ]
    )


def _poisson_kernel(lam: float) -> np.ndarray:
    """Probabilities of Poisson(lam) for j = 0..J, J past the 1e-22 tail.

    Rescaled to unit total so the kernel contributes no coherent scale
    error to weight sums.
    """
    if lam == 0.0:
        return np.ones(1)
    if lam <= 300.0:
        q = [math.exp(-lam)]
        j = 0
        while q[-1] >= _POISSON_TAIL or j < lam:
            q.append(q[-1] * lam / (j + 1))
            j += 1
        kernel = np.asarray(q)
    else:
        # Very large intensities underflow the recurrence seed; build the
        # kernel in log space instead.
        j_hi = int(lam + 40.0 * math.sqrt(lam) + 30.0)
        j = np.arange(j_hi + 1, dtype=float)
        logq = j * math.log(lam) - lam - np.array(
            [math.lgamma(v + 1.0) for v in j]
        )
        kernel = np.exp(logq)
    return kernel / math.fsum(kernel)


# Below e**(-_HEAD_LOG_LIMIT) the head weight b_0 = (1+x)**(-n) loses too
# much headroom for a forward pass; such sequences are built outward from
# their mode instead.
_HEAD_LOG_LIMIT = 600.0
_UNDERFLOW_CUT = 1e-320
_FULL_BUILD_CAP = 1_500_000


class WeightSeries:
    """Ascending-k stream of weights W_{n,k}(x) for one (n, a, x).

    Classical weights follow the ratio recurrence
    b_i = b_{i-1} * ((n+i-1)/i) * u with u = x/(1+x).  Whenever the
    support fits in memory (the overwhelmingly common case) the whole
    sequence is materialized and rescaled to unit total: the true total
    is exactly 1, so the rescale removes the coherent drift a long
    multiplicative recurrence accumulates.  Entries below 1e-320 are
    stored as zeros, discarding under 1e-315 of mass.  Enormous supports
    fall back to an unnormalized streaming pass.  The Poisson kernel is
    truncated below 1e-22.  Each W_k is the ascending-j dot product of
    the kernel with the classical weights and never depends on how
    callers chunk their requests.
    """

    def __init__(self, n: int, a: float, x: float):
        if x < 0:
            raise ValueError("x must be non-negative")
        if a < 0:
            raise ValueError("a must be non-negative")
        if int(n) != n or n < 1:
            raise ValueError("n must be a positive integer")
        self.n = int(n)
        self.a = float(a)
        self.x = float(x)
        self._u = self.x / (1.0 + self.x)
        self._q = _poisson_kernel(self.a * self._u)
        self._b = np.empty(0)
        self._complete = False
        if self._u == 0.0:
            self._b = np.ones(1)
            self._complete = True
            return
        bulk = self.n * self.x
        spread = 12.0 * math.sqrt(bulk * (1.0 + self.x))
        tail = 740.0 / max(-math.log(self._u), 1e-12)
        if bulk + spread + tail + 64.0 <= _FULL_BUILD_CAP:
            self._build_full(int(bulk + spread + tail) + 64)

    def _forward_chunk(self, start: int, count: int, seed: float) -> np.ndarray:
        """b[start .. start+count-1] continuing the recurrence from seed
        = b[start-1] (or b[0] itself when start == 0)."""
        idx = np.arange(max(start, 1), start + count, dtype=float)
        ratios = ((self.n + idx - 1.0) / idx) * self._u
        if start == 0:
            chunk = np.empty(count)
            chunk[0] = seed
            chunk[1:] = seed * np.cumprod(ratios)
            return chunk
        return seed * np.cumprod(ratios)

    def _build_full(self, length: int) -> None:
        n, u = self.n, self._u
        if n * math.log1p(self.x) <= _HEAD_LOG_LIMIT:
            head = math.exp(-n * math.log1p(self.x))
            b = self._forward_chunk(0, length, head)
            while b[-1] >= _UNDERFLOW_CUT and b.size < _FULL_BUILD_CAP:
                b = np.concatenate([b, self._forward_chunk(b.size, BLOCK, b[-1])])
        else:
            # Head underflows; grow outward from the mode, where the
            # sequence peaks, so every cumprod only ever decays.
            mode = max(int(math.floor(self.x * (n - 1))), 1)
            idx_up = np.arange(mode, mode + max(length - mode, 16), dtype=float)
            up = np.concatenate(
                ([1.0], np.cumprod(((n + idx_up) / (idx_up + 1.0)) * u))
            )
            while up[-1] >= _UNDERFLOW_CUT and mode + up.size < _FULL_BUILD_CAP:
                idx_up = np.arange(mode + up.size - 1, mode + up.size - 1 + BLOCK,
                                   dtype=float)
                up = np.concatenate(
                    [up, up[-1] * np.cumprod(((n + idx_up) / (idx_up + 1.0)) * u)]
                )
            idx_down = np.arange(mode, 0, -1, dtype=float)
            down = np.cumprod((idx_down / (n + idx_down - 1.0)) / u)
            b = np.zeros(mode + up.size)
            b[mode:] = up
            keep = down >= _UNDERFLOW_CUT
            b[mode - 1 - np.flatnonzero(keep)] = down[keep]
        b /= math.fsum(b)
        self._b = b
        self._complete = True

    def _ensure_classical(self, upto: int) -> None:
        cur = self._b.size
        if self._complete or upto < cur:
            return
        if cur == 0:
            seed = math.exp(-self.n * math.log1p(self.x))
            self._b = self._forward_chunk(0, upto + 1, seed)
        else:
            chunk = self._forward_chunk(cur, upto + 1 - cur, self._b[-1])
            self._b = np.concatenate([self._b, chunk])

    def _classical_slice(self, lo: int, hi: int) -> np.ndarray:
        """b[lo:hi] with zero padding past the stored (complete) range."""
        b = self._b
        if hi <= b.size:
            return b[lo:hi]
        out = np.zeros(hi - lo)
        if lo < b.size:
            out[: b.size - lo] = b[lo:]
        return out

    def weights_block(self, k0: int, k1: int) -> np.ndarray:
        """Weights for k in [k0, k1), ascending."""
        if k0 < 0 or k1 <= k0:
            raise ValueError("need 0 <= k0 < k1")
        self._ensure_classical(k1 - 1)
        out = np.zeros(k1 - k0)
        for j, qj in enumerate(self._q):
            hi = k1 - j
            if hi <= 0:
                break
            lo = k0 - j
            if lo >= 0:
                out += qj * self._classical_slice(lo, hi)
            else:
                out[-lo:] += qj * self._classical_slice(0, hi)
        return out

    def weight(self, k: int) -> float:
        return float(self.weights_block(k, k + 1)[0])


def basis_weight(params: OperatorParams, k: int, x: float) -> float:
    """Single weight W_{n,k}(x) via the convolution representation.

    At x = 0 the weight is the Kronecker delta at k = 0.  The result is
    non-negative and independent of the node shifts (alpha, beta).
    """
    if int(k) != k or k < 0:
        raise ValueError("k must be a non-negative integer")
    if x < 0:
        raise ValueError("x must be non-negative")
    if x == 0.0:
        return 1.0 if k == 0 else 0.0
    return WeightSeries(params.n, params.a, x).weight(int(k))


def basis_weight_direct(params: OperatorParams, k: int, x: float) -> float:
    """Single weight evaluated from the defining closed form, in log space.

    Cross-check for :func:`basis_weight`; the two routes must agree.
    """
    if int(k) != k or k < 0:
        raise ValueError("k must be a non-negative integer")
    if x < 0:
        raise ValueError("x must be non-negative")
    k = int(k)
    if x == 0.0:
        return 1.0 if k == 0 else 0.0
    n, a = params.n, params.a
    u = x / (1.0 + x)
    logw = (
        -a * u
        + log_p_poly(k, n, a)
        - math.lgamma(k + 1)
        + k * math.log(x)
        - (n + k) * math.log1p(x)
    )
    return math.exp(logw)


def weight_prefix_mass(params: OperatorParams, x: float, K: int) -> float:
    """Accumulated weight mass sum_{k=0}^{K} W_{n,k}(x).

    Non-decreasing in K and converging to 1.  The float sum can creep a
    few ulp past 1, so the result is clamped into [0, 1].
    """
    if int(K) != K or K < 0:
        raise ValueError("K must be a non-negative integer")
    if x < 0:
        raise ValueError("x must be non-negative")
    if x == 0.0:
        return 1.0
    series = WeightSeries(params.n, params.a, x)
    return min(math.fsum(series.weights_block(0, int(K) + 1)), 1.0)
