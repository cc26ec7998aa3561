"""Moment identities, their series oracle, and the formula audit.

The package carries a catalog of closed-form moment identities for the
operator family, keyed by stable identifiers:

    2.1.t0 .. 2.1.t4    raw moments t**j of the unshifted operator
    2.1.t4.corrected    repaired reading of the malformed 2.1.t4 entry
    2.2.i  .. 2.2.v     raw moments t**j of the shifted operator
    2.3.psi0/1/2/4      central moments (t - x)**order
    2.4.psi1/psi2/psi4  scaled large-n limits n * psi1, n * psi2, n**2 * psi4

Catalog entries are transcribed literally, typos included: the point of
the audit is to compare each entry against ground truth rather than to
silently repair it.  Ground truth is the brute-force series oracle; for
central moments a second reference (binomial expansion of the audited raw
moments) is recorded as well, and for the 2.4 limits the oracle is a
Richardson-extrapolated ladder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .basis import OperatorParams, TruncationPolicy
from .operators import NonConvergenceError, series_sum

__all__ = [
    "ALGEBRAIC_TOLERANCE",
    "CENTRAL_MOMENT_ORDERS",
    "LEMMA_IDS",
    "LIMIT_LADDER",
    "LIMIT_TOLERANCE",
    "SUSPECT_IDS",
    "MomentReport",
    "asymptotic_limit",
    "audit_lemma",
    "central_moment_closed",
    "central_moment_derived",
    "central_moment_oracle",
    "raw_moment_closed",
    "raw_moment_mihesan",
    "raw_moment_mihesan_t4_corrected",
    "raw_moment_oracle",
    "richardson_limit",
]

CENTRAL_MOMENT_ORDERS = (0, 1, 2, 4)

# Relative tolerance separating float noise from genuine formula damage.
ALGEBRAIC_TOLERANCE = 1e-8
# The 2.4 limits are reached by extrapolation, not algebra; 1% is the
# resolution the doubling ladder supports.
LIMIT_TOLERANCE = 1e-2
LIMIT_LADDER = tuple(2 ** j for j in range(4, 15))

LEMMA_IDS = (
    "2.1.t0", "2.1.t1", "2.1.t2", "2.1.t3", "2.1.t4", "2.1.t4.corrected",
    "2.2.i", "2.2.ii", "2.2.iii", "2.2.iv", "2.2.v",
    "2.3.psi0", "2.3.psi1", "2.3.psi2", "2.3.psi4",
    "2.4.psi1", "2.4.psi2", "2.4.psi4",
)

# Entries whose transcriptions carry visible typesetting damage or stand
# on unverifiable coefficients; discrepancies here are expected findings,
# not audit failures.
SUSPECT_IDS = frozenset({"2.1.t4", "2.2.v", "2.3.psi4", "2.4.psi4"})


@dataclass(frozen=True)
class MomentReport:
    """Audit record for one catalog identity at one (params, x).

    rel_diff is abs_diff / (1 + |oracle_value|); verdict is "match" iff
    rel_diff is at most the tolerance used.  derived_value is filled for
    central moments only, extrapolants (the last three Richardson values)
    for the 2.4 limits only.
    """

    lemma_id: str
    params: OperatorParams
    x: float
    printed_value: float
    oracle_value: float
    derived_value: Optional[float]
    abs_diff: float
    rel_diff: float
    verdict: str
    extrapolants: Optional[tuple[float, ...]] = field(default=None)


# ---------------------------------------------------------------------------
# Catalog: raw moments of the unshifted operator (2.1.*)
# ---------------------------------------------------------------------------

def raw_moment_mihesan(n: int, a: float, j: int, x: float) -> float:
    """Catalog entry 2.1.t<j>: unshifted raw moment, transcribed literally.

    For j = 4 this reproduces the malformed nested fraction exactly as
    typeset; the repaired reading lives in
    :func:`raw_moment_mihesan_t4_corrected`.
    """
    if j not in (0, 1, 2, 3, 4):
        raise ValueError("j must be one of 0..4")
    n = float(n)
    w = 1.0 + x
    if j == 0:
        return 1.0
    if j == 1:
        return x + a * x / (n * w)
    if j == 2:
        return (
            x ** 2 / n
            + x / n
            + x ** 2
            + a ** 2 * x ** 2 / (n ** 2 * w ** 2)
            + 2 * a * x ** 2 / (n * w)
            + a * x / (n ** 2 * w)
        )
    if j == 3:
        return (
            x ** 3
            + 3 * x ** 2 * w / n
            + x * w * (1 + 2 * x) / n ** 2
            + 3 * a * x ** 3 / (n * w)
            + (3 * a * x ** 2 + 3 * a ** 2 * x ** 3 / w ** 2 + 3 * a * x ** 2 / w) / n ** 2
            + (a * x / w + 3 * a ** 2 * x ** 2 / w ** 2 + a ** 3 * x ** 3 / w ** 3) / n ** 3
        )
    # j == 4, as typeset: the first 1/n**2 group nests one term inside the
    # denominator of another.
    nested = 12 * a * x ** 4 / (w + 6 * a ** 2 * x ** 4 / w ** 2)
    return (
        x ** 4
        + 6 * x ** 3 * w / n
        + x ** 2 * w * (7 + 11 * x) / n ** 2
        + x * w * (6 * x ** 2 + 6 * x + 1) / n ** 3
        + 4 * a * x ** 4 / (n * w)
        + (nested + 18 * a * x ** 3 / w) / n ** 2
        + (
            8 * a * x ** 4 / w
            + 6 * a ** 2 * x ** 4 / w ** 2
            + 4 * a ** 3 * x ** 4 / w ** 3
            + 18 * a * x ** 3 / w
            + 18 * a ** 2 * x ** 3 / w ** 2
            + 14 * a * x ** 2 / w
        ) / n ** 3
        + (
            a * x / w
            + 7 * a ** 2 * x ** 2 / w ** 2
            + 6 * a ** 3 * x ** 3 / w ** 3
            + a ** 4 * x ** 4 / w ** 4
        ) / n ** 4
    )


def raw_moment_mihesan_t4_corrected(n: int, a: float, x: float) -> float:
    """Catalog entry 2.1.t4.corrected: the nested 1/n**2 group read as the
    three flat terms 12ax^4/(1+x) + 6a^2x^4/(1+x)^2 + 18ax^3/(1+x)."""
    n = float(n)
    w = 1.0 + x
    return (
        x ** 4
        + 6 * x ** 3 * w / n
        + x ** 2 * w * (7 + 11 * x) / n ** 2
        + x * w * (6 * x ** 2 + 6 * x + 1) / n ** 3
        + 4 * a * x ** 4 / (n * w)
        + (
            12 * a * x ** 4 / w
            + 6 * a ** 2 * x ** 4 / w ** 2
            + 18 * a * x ** 3 / w
        ) / n ** 2
        + (
            8 * a * x ** 4 / w
            + 6 * a ** 2 * x ** 4 / w ** 2
            + 4 * a ** 3 * x ** 4 / w ** 3
            + 18 * a * x ** 3 / w
            + 18 * a ** 2 * x ** 3 / w ** 2
            + 14 * a * x ** 2 / w
        ) / n ** 3
        + (
            a * x / w
            + 7 * a ** 2 * x ** 2 / w ** 2
            + 6 * a ** 3 * x ** 3 / w ** 3
            + a ** 4 * x ** 4 / w ** 4
        ) / n ** 4
    )


# ---------------------------------------------------------------------------
# Catalog: raw moments of the shifted operator (2.2.*)
# ---------------------------------------------------------------------------

def raw_moment_closed(params: OperatorParams, j: int, x: float) -> float:
    """Catalog entry 2.2.(i)-(v): shifted raw moment, transcribed literally.

    The entry (v) denominator printed as (b + beta)**4 is read as
    (n + beta)**4; b appears nowhere else and the audit decides whether
    the reading holds.
    """
    if j not in (0, 1, 2, 3, 4):
        raise ValueError("j must be one of 0..4")
    n = float(params.n)
    a, al, be = params.a, params.alpha, params.beta
    w = 1.0 + x
    nb = n + be
    if j == 0:
        return 1.0
    if j == 1:
        return n / nb * x + a / nb * x / w + al / nb
    if j == 2:
        return (
            (n ** 2 + n) / nb ** 2 * x ** 2
            + n * (1 + 2 * al) / nb ** 2 * x
            + a ** 2 / nb ** 2 * x ** 2 / w ** 2
            + 2 * a * n / nb ** 2 * x ** 2 / w
            + a * (1 + 2 * al) / nb ** 2 * x / w
            + al ** 2 / nb ** 2
        )
    if j == 3:
        return (
            (n ** 3 + 3 * n ** 2 + 2 * n) / nb ** 3 * x ** 3
            + (n ** 2 * (3 + 3 * al) + n * (3 + 3 * al + 3 * a)) / nb ** 3 * x ** 2
            + n * (1 + 3 * al + 3 * al ** 2) / nb ** 3 * x
            + 3 * a * n ** 2 / nb ** 3 * x ** 3 / w
            + n / nb ** 3 * (
                3 * a ** 2 * x ** 3 / w ** 2
                + 3 * a * x ** 2 / w
                + 6 * a * al * x ** 2 / w
            )
            + (
                a * x / w
                + 3 * a ** 2 * x ** 2 / w ** 2
                + a ** 3 * x ** 3 / w ** 3
                + 3 * al * a ** 2 * x ** 2 / w ** 2
                + 3 * al ** 2 * a * x / w
                + al ** 3
            ) / nb ** 3
        )
    # j == 4
    return (
        (n ** 4 + 6 * n ** 3 + 11 * n ** 2 + 6 * n) / nb ** 4 * x ** 4
        + ((6 + 4 * al) * n ** 3 + (18 + 12 * al) * n ** 2 + (9 + 8 * al) * n)
        / nb ** 4 * x ** 3
        + (
            (7 + 12 * al + 6 * al ** 2) * n ** 2
            + (7 + 12 * al + 12 * al * a + 6 * al ** 2) * n
        ) / nb ** 4 * x ** 2
        + (1 + 4 * al + 6 * al ** 2 + 4 * al ** 3) * n / nb ** 4 * x
        + (4 * a * n ** 3 + 12 * a * n ** 2 + 8 * a * n) / nb ** 4 * x ** 4 / w
        + (6 * a ** 2 * n ** 2 + 6 * a ** 2 * n) / nb ** 4 * x ** 4 / w ** 2
        + 4 * a ** 3 * n / nb ** 4 * x ** 4 / w ** 3
        + a ** 4 / nb ** 4 * x ** 4 / w ** 4
        + (18 * a * n ** 2 + 18 * a * n) / nb ** 4 * x ** 3 / w
        + (18 * a ** 2 + 12 * a ** 2 * al) * n / nb ** 4 * x ** 3 / w ** 2
        + (6 * a ** 3 + 4 * al * a ** 3) / nb ** 4 * x ** 3 / w ** 3
        + (12 * a * al ** 2 + 12 * a * al + 14 * a) * n / nb ** 4 * x ** 2 / w
        + (7 * a ** 2 + 12 * a ** 2 * al + 6 * a ** 2 * al ** 2) / nb ** 4 * x ** 2 / w ** 2
        + (a + 4 * al * a + 6 * al ** 2 * a + 4 * al ** 3 * a) / nb ** 4 * x / w
        + al ** 4 / nb ** 4
    )


# ---------------------------------------------------------------------------
# Catalog: central moments (2.3.*) and scaled limits (2.4.*)
# ---------------------------------------------------------------------------

def central_moment_closed(params: OperatorParams, order: int, x: float) -> float:
    """Catalog entry 2.3.psi<order>: central moment, transcribed literally.

    Only orders 0, 1, 2 and 4 exist in the catalog.
    """
    if order not in CENTRAL_MOMENT_ORDERS:
        raise ValueError("order must be one of 0, 1, 2, 4")
    n = float(params.n)
    a, al, be = params.a, params.alpha, params.beta
    w = 1.0 + x
    nb = n + be
    if order == 0:
        return 1.0
    if order == 1:
        return (n / nb - 1.0) * x + a / nb * x / w + al / nb
    if order == 2:
        return (
            (n + be ** 2) / nb ** 2 * x ** 2
            + (n - 2 * al * be) / nb ** 2 * x
            + a ** 2 / nb ** 2 * x ** 2 / w ** 2
            - 2 * a * be / nb ** 2 * x ** 2 / w
            + a * (1 + 2 * al) / nb ** 2 * x / w
            + al ** 2 / nb ** 2
        )
    # order == 4
    return (
        ((3 - 12 * be) * n ** 2 + (6 + 4 * be + 2 * be ** 2 + 4 * be ** 3) * n + be ** 4)
        / nb ** 4 * x ** 4
        + (
            (6 - 12 * a - 12 * be) * n ** 2
            + (9 + 8 * al - 12 * be * (1 + a + al + al * be)) * n
            + (6 - 12 * a - 12 * be - 12 * al * be ** 2)
        ) / nb ** 4 * x ** 3
        + (
            3 * n ** 2
            + (7 - 4 * be + 12 * al * a - 12 * al * be + 6 * al ** 2) * n
            + 6 * al ** 2 * be ** 2
        ) / nb ** 4 * x ** 2
        + ((1 + 4 * al + 6 * al ** 2) * n - 4 * al ** 3 * be) / nb ** 4 * x
        + (12 * a * n ** 2 + 8 * a * n - 4 * a * be ** 3) / nb ** 4 * x ** 4 / w
        + (6 * a ** 2 * n + 6 * a ** 2 * be ** 2) / nb ** 4 * x ** 4 / w ** 2
        - 4 * a ** 3 * be / nb ** 4 * x ** 4 / w ** 3
        + a ** 4 / nb ** 4 * x ** 4 / w ** 4
        + (12 * a * n ** 2 + 18 * a * n + 6 * a * (1 + 2 * al) * be ** 2)
        / nb ** 4 * x ** 3 / w
        + (6 * a ** 2 * n - (12 * a ** 2 + 12 * al * a ** 2) * be) / nb ** 4 * x ** 3 / w ** 2
        + (6 * a ** 3 + 4 * al * a ** 3) / nb ** 4 * x ** 3 / w ** 3
        + ((12 * a * al + 8 * a - 6 * a * al ** 2) * n - (6 * a + 18 * al ** 2 * a) * be)
        / nb ** 4 * x ** 2 / w
        + (7 * a ** 2 + 12 * a ** 2 * al + 6 * a ** 2 * al ** 2) / nb ** 4 * x ** 2 / w ** 2
        + (a + 4 * al * a + 6 * al ** 2 * a + 4 * al ** 3 * a) / nb ** 4 * x / w
        + al ** 4 / nb ** 4
    )


def central_moment_derived(params: OperatorParams, order: int, x: float) -> float:
    """Central moment by binomial expansion of the catalog raw moments.

    sum_j C(order, j) * (-x)**(order-j) * raw_moment_closed(j).  This is
    independent of the 2.3 typesetting but inherits whatever damage the
    2.2 entries carry.
    """
    if not 0 <= order <= 4:
        raise ValueError("order must lie in 0..4")
    return math.fsum(
        math.comb(order, j) * (-x) ** (order - j) * raw_moment_closed(params, j, x)
        for j in range(order + 1)
    )


def asymptotic_limit(a: float, alpha: float, beta: float, which: str, x: float) -> float:
    """Catalog entry 2.4: printed limit of the scaled central moments.

    which is one of "psi1_times_n", "psi2_times_n", "psi4_times_n2".
    """
    w = 1.0 + x
    if which == "psi1_times_n":
        return alpha - beta * x + a * x / w
    if which == "psi2_times_n":
        return x ** 2 + x
    if which == "psi4_times_n2":
        return (
            (3 - 12 * beta) * x ** 4
            + (6 - 12 * a - 12 * beta) * x ** 3
            + 3 * x ** 2
            + 12 * a * x ** 2 / w
            + 12 * a * x ** 3 / w
        )
    raise ValueError(f"unknown limit id '{which}'")


# ---------------------------------------------------------------------------
# Series oracle
# ---------------------------------------------------------------------------

def raw_moment_oracle(
    params: OperatorParams,
    j: int,
    x: float,
    policy: TruncationPolicy | None = None,
) -> float:
    """Brute-force series value of the shifted raw moment t**j."""
    if j not in (0, 1, 2, 3, 4):
        raise ValueError("j must be one of 0..4")
    policy = policy or TruncationPolicy()
    result = series_sum(
        params.n, params.a, params.alpha, params.beta,
        lambda _k, t: t ** j, x, policy,
    )
    return result.value


def central_moment_oracle(
    params: OperatorParams,
    order: int,
    x: float,
    policy: TruncationPolicy | None = None,
) -> float:
    """Brute-force series value of the central moment (t - x)**order.

    The deviation node_k - x is formed as (k + alpha - x*(n + beta)) over
    (n + beta), which keeps the tiny odd moments free of cancellation
    noise from the O(1) node values.
    """
    if not 0 <= order <= 4:
        raise ValueError("order must lie in 0..4")
    policy = policy or TruncationPolicy()
    n, a, al, be = params.n, params.a, params.alpha, params.beta
    shift = x * (n + be)

    def g(k, _t):
        return ((k + al - shift) / (n + be)) ** order

    return series_sum(n, a, al, be, g, x, policy).value


def richardson_limit(
    ns: Sequence[int], values: Sequence[float]
) -> tuple[float, tuple[float, ...]]:
    """Limit of a sequence with leading 1/n error, from successive pairs.

    Each extrapolant combines (n_i, n_{i+1}) as (r*S_{i+1} - S_i)/(r - 1)
    with r = n_{i+1}/n_i; for a doubling ladder this is 2*S(2n) - S(n).
    Returns the last extrapolant and the full extrapolant sequence.
    """
    if len(ns) != len(values) or len(ns) < 2:
        raise ValueError("need matching sequences of at least two entries")
    extrap = []
    for i in range(len(ns) - 1):
        r = ns[i + 1] / ns[i]
        extrap.append((r * values[i + 1] - values[i]) / (r - 1.0))
    return extrap[-1], tuple(extrap)


_LIMIT_SPECS = {
    "2.4.psi1": ("psi1_times_n", 1, 1),
    "2.4.psi2": ("psi2_times_n", 2, 1),
    "2.4.psi4": ("psi4_times_n2", 4, 2),
}


def _limit_oracle(
    params: OperatorParams,
    lemma_id: str,
    x: float,
    policy: TruncationPolicy,
    ladder: Sequence[int] = LIMIT_LADDER,
) -> tuple[float, tuple[float, ...]]:
    _, order, power = _LIMIT_SPECS[lemma_id]
    values = []
    for n in ladder:
        pn = OperatorParams(n=n, a=params.a, alpha=params.alpha, beta=params.beta)
        values.append(float(n) ** power * central_moment_oracle(pn, order, x, policy))
    limit, extrap = richardson_limit(list(ladder), values)
    return limit, extrap[-3:]


# ---------------------------------------------------------------------------
# Audit
# ---------------------------------------------------------------------------

def _printed_value(lemma_id: str, params: OperatorParams, x: float) -> float:
    if lemma_id.startswith("2.1."):
        tag = lemma_id.split(".", 2)[2]
        if tag == "t4.corrected" or lemma_id == "2.1.t4.corrected":
            return raw_moment_mihesan_t4_corrected(params.n, params.a, x)
        return raw_moment_mihesan(params.n, params.a, int(tag[1]), x)
    if lemma_id.startswith("2.2."):
        j = ("i", "ii", "iii", "iv", "v").index(lemma_id.split(".")[2])
        return raw_moment_closed(params, j, x)
    if lemma_id.startswith("2.3."):
        order = int(lemma_id.split("psi")[1])
        return central_moment_closed(params, order, x)
    if lemma_id in _LIMIT_SPECS:
        which = _LIMIT_SPECS[lemma_id][0]
        return asymptotic_limit(params.a, params.alpha, params.beta, which, x)
    raise ValueError(f"unknown lemma id '{lemma_id}'")


def audit_lemma(
    lemma_id: str,
    params: OperatorParams,
    x: float,
    policy: TruncationPolicy | None = None,
    tolerance: float | None = None,
    ladder: Sequence[int] = LIMIT_LADDER,
) -> MomentReport:
    """Compare one catalog identity against the series oracle.

    2.1 entries are audited with the node shifts zeroed out (they describe
    the unshifted operator).  Oracle non-convergence is reported in the
    verdict, never raised.
    """
    if lemma_id not in LEMMA_IDS:
        raise ValueError(f"unknown lemma id '{lemma_id}'")
    policy = policy or TruncationPolicy()
    if tolerance is None:
        tolerance = LIMIT_TOLERANCE if lemma_id in _LIMIT_SPECS else ALGEBRAIC_TOLERANCE

    printed = _printed_value(lemma_id, params, x)
    derived: Optional[float] = None
    extrapolants: Optional[tuple[float, ...]] = None
    try:
        if lemma_id.startswith("2.1."):
            base = OperatorParams(n=params.n, a=params.a, alpha=0.0, beta=0.0)
            tag = lemma_id.split(".", 2)[2]
            j = 4 if tag.startswith("t4") else int(tag[1])
            oracle = raw_moment_oracle(base, j, x, policy)
        elif lemma_id.startswith("2.2."):
            j = ("i", "ii", "iii", "iv", "v").index(lemma_id.split(".")[2])
            oracle = raw_moment_oracle(params, j, x, policy)
        elif lemma_id.startswith("2.3."):
            order = int(lemma_id.split("psi")[1])
            oracle = central_moment_oracle(params, order, x, policy)
            derived = central_moment_derived(params, order, x)
        else:
            oracle, extrapolants = _limit_oracle(params, lemma_id, x, policy, ladder)
    except NonConvergenceError:
        return MomentReport(
            lemma_id=lemma_id,
            params=params,
            x=x,
            printed_value=printed,
            oracle_value=math.nan,
            derived_value=derived,
            abs_diff=math.nan,
            rel_diff=math.nan,
            verdict="discrepancy",
            extrapolants=extrapolants,
        )

    abs_diff = abs(printed - oracle)
    rel_diff = abs_diff / (1.0 + abs(oracle))
    verdict = "match" if rel_diff <= tolerance else "discrepancy"
    return MomentReport(
        lemma_id=lemma_id,
        params=params,
        x=x,
        printed_value=printed,
        oracle_value=oracle,
        derived_value=derived,
        abs_diff=abs_diff,
        rel_diff=rel_diff,
        verdict=verdict,
        extrapolants=extrapolants,
    )
