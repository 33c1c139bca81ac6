"""Exact generating series for k-run overpartitions and related identities.

The workhorse is :func:`double_sum`, which expands

    sum_{r,s>=0} sign(r,s) x^(k r + (k+1) s)
        q^(k(k+1)(r+s)^2/2 + (k+1)s(s+1)/2) / ((q^k;q^k)_r (q^(k+1);q^(k+1))_s)

with the sign on ``s`` (k-run overpartitions) or on ``r`` (partitions
without k-sequences).  Every other series is built from it or from
Pochhammer products, and each claimed identity has a ``check_*`` function
returning a :class:`VerificationReport`.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np

from .series import (
    BiSeries,
    IntSeries,
    _zeros,
    div_one_minus_qm,
    divide,
    divide_by_euler,
    mul_one_minus_qm,
    pochhammer,
)

log = logging.getLogger(__name__)

__all__ = [
    "VerificationReport",
    "compare",
    "double_sum",
    "hk_series",
    "gbar_series",
    "gk_series",
    "lbar_bivariate",
    "gbar_bivariate",
    "xq_pochhammer",
    "xq_pochhammer_inverse",
    "check_gbar_difference",
    "check_lbar_difference",
    "check_q_difference",
    "lambda_coeffs",
    "check_lambda_recurrence",
    "phi_series",
    "chi_series",
    "fine_bracket_series",
    "check_gbar1_fine",
    "check_gbar1_phi",
    "check_g2_chi",
]


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of comparing two truncated series coefficient by coefficient.

    ``first_mismatch`` is an ``int`` for univariate series and an
    ``(x_degree, q_degree)`` pair for bivariate ones.  Informational reports
    are emitted for the record and never gate a verification run.
    """

    identity_name: str
    trunc_order: int | tuple[int, int]
    status: Literal["pass", "fail"]
    first_mismatch: int | tuple[int, int] | None = None
    lhs_coeff: int | None = None
    rhs_coeff: int | None = None
    informational: bool = False
    details: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if (self.status == "pass") != (self.first_mismatch is None):
            raise ValueError("status must be 'pass' exactly when there is no mismatch")

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict[str, Any]:
        def enc(v):
            if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
                return str(int(v))
            if isinstance(v, (list, tuple)):
                return [enc(x) for x in v]
            if isinstance(v, dict):
                return {key: enc(x) for key, x in v.items()}
            return v

        fm = self.first_mismatch
        return {
            "identity_name": self.identity_name,
            "trunc_order": list(self.trunc_order) if isinstance(self.trunc_order, tuple) else self.trunc_order,
            "status": self.status,
            "first_mismatch": list(fm) if isinstance(fm, tuple) else fm,
            "lhs_coeff": None if self.lhs_coeff is None else str(self.lhs_coeff),
            "rhs_coeff": None if self.rhs_coeff is None else str(self.rhs_coeff),
            "informational": self.informational,
            "details": enc(self.details),
        }


def compare(
    name: str,
    lhs: IntSeries | BiSeries,
    rhs: IntSeries | BiSeries,
    *,
    informational: bool = False,
    head: int = 0,
) -> VerificationReport:
    """Compare two series on their common truncation window.

    With ``head > 0`` the first ``head`` coefficients of both sides are
    attached to the report when it fails.
    """
    if isinstance(lhs, BiSeries) != isinstance(rhs, BiSeries):
        raise TypeError("cannot compare a univariate with a bivariate series")
    details: dict[str, Any] = {}
    if isinstance(lhs, BiSeries):
        M = min(lhs.x_order, rhs.x_order)
        N = min(lhs.q_order, rhs.q_order)
        a, b = lhs.table[: M + 1, : N + 1], rhs.table[: M + 1, : N + 1]
        bad = np.argwhere(a != b)
        order: int | tuple[int, int] = (M, N)
        if len(bad) == 0:
            return VerificationReport(name, order, "pass", informational=informational)
        m, n = (int(v) for v in bad[0])
        return VerificationReport(
            name, order, "fail", (m, n), int(a[m, n]), int(b[m, n]), informational, details
        )
    N = min(lhs.order, rhs.order)
    a, b = lhs.array[: N + 1], rhs.array[: N + 1]
    bad = np.flatnonzero(a != b)
    if len(bad) == 0:
        return VerificationReport(name, N, "pass", informational=informational)
    i = int(bad[0])
    if head:
        details = {"lhs_head": [int(c) for c in a[:head]], "rhs_head": [int(c) for c in b[:head]]}
    return VerificationReport(name, N, "fail", i, int(a[i]), int(b[i]), informational, details)


# ---------------------------------------------------------------------------
# the double sum


def _exponent(k: int, r: int, s: int) -> int:
    return k * (k + 1) * (r + s) ** 2 // 2 + (k + 1) * s * (s + 1) // 2


def _sign(r: int, s: int, sign_on: str) -> int:
    return -1 if (s if sign_on == "s" else r) % 2 else 1


def _row_for_s(k: int, s: int, order: int, sign_on: str, x_order: int | None):
    """All ``r`` terms for a fixed ``s``; returns ``{x_degree: array}``.

    ``1/(q^(k+1);q^(k+1))_s`` is rebuilt from scratch here so each ``s``
    is independent (and can be farmed out); the ``1/(q^k;q^k)_r`` factor
    is updated one ``r`` at a time.
    """
    e0 = _exponent(k, 0, s)
    cur = _zeros(order - e0 + 1)
    cur[0] = 1
    for j in range(1, s + 1):
        cur = div_one_minus_qm(cur, (k + 1) * j)
    out: dict[int, np.ndarray] = {}
    r = 0
    while True:
        e = _exponent(k, r, s)
        m = k * r + (k + 1) * s
        if e > order or (x_order is not None and m > x_order):
            break
        if r:
            cur = div_one_minus_qm(cur[: order - e + 1], k * r)
        key = m if x_order is not None else 0
        acc = out.get(key)
        if acc is None:
            acc = out[key] = _zeros(order + 1)
        if _sign(r, s, sign_on) > 0:
            acc[e:] += cur
        else:
            acc[e:] -= cur
        r += 1
    return out


def _row_job(args):
    return _row_for_s(*args)


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get("QRUN_THREADS", "1")))
    except ValueError:
        return 1


def double_sum(
    k: int,
    order: int,
    *,
    sign_on: Literal["r", "s"] = "s",
    x_order: int | None = None,
    workers: int | None = None,
) -> IntSeries | BiSeries:
    """Expand the (r, s) double sum to ``q^order``.

    ``sign_on='s'`` gives ``H_k`` (the numerator of the k-run overpartition
    generating function), ``sign_on='r'`` gives Andrews' series for
    partitions without k-sequences.  With ``x_order`` set, terms are kept
    apart by their ``x``-degree ``k r + (k+1) s`` and a :class:`BiSeries`
    is returned.

    Diagonals ``r+s = t`` stop contributing once ``k(k+1)t^2/2 > order``.
    ``workers > 1`` spreads the ``s`` rows over processes; integer sums are
    exact, so the result does not depend on the split.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if sign_on not in ("r", "s"):
        raise ValueError("sign_on must be 'r' or 's'")
    s_values = []
    s = 0
    while _exponent(k, 0, s) <= order and (x_order is None or (k + 1) * s <= x_order):
        s_values.append(s)
        s += 1
    jobs = [(k, s, order, sign_on, x_order) for s in s_values]
    workers = _default_workers() if workers is None else workers
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_row_job, jobs))
    else:
        rows = [_row_for_s(*job) for job in jobs]

    if x_order is None:
        total = _zeros(order + 1)
        for row in rows:
            for arr in row.values():
                total += arr
        return IntSeries._wrap(total)
    table = np.empty((x_order + 1, order + 1), dtype=object)
    table.fill(0)
    for row in rows:
        for m, arr in row.items():
            table[m] += arr
    return BiSeries._wrap(table)


def hk_series(k: int, order: int, workers: int | None = None) -> IntSeries:
    """``H_k(q) = (q;q)_inf * Gbar_k(q)`` from the double sum."""
    return double_sum(k, order, sign_on="s", workers=workers)


def gbar_series(k: int, order: int, workers: int | None = None) -> IntSeries:
    """Generating function of lower k-run overpartitions, coefficients ``pbar_k(0..order)``."""
    return divide_by_euler(hk_series(k, order, workers))


def gk_series(k: int, order: int, workers: int | None = None) -> IntSeries:
    """Generating function of partitions without k-sequences, ``p_k(0..order)``.

    The sign-on-``r`` double sum alone is not the generating function; it
    still has to be divided by ``(q;q)_inf``, exactly as for ``Gbar_k``.
    """
    return divide_by_euler(double_sum(k, order, sign_on="r", workers=workers))


# ---------------------------------------------------------------------------
# bivariate


def xq_pochhammer(x_order: int, q_order: int, n: int | None = None) -> BiSeries:
    """``(xq;q)_n`` as a bivariate series; ``n=None`` for the infinite product.

    The infinite product uses the q-binomial expansion
    ``sum_m (-1)^m q^(m(m+1)/2) x^m / (q;q)_m``.
    """
    if n is None:
        cols = []
        dq = IntSeries.one(q_order)
        for m in range(x_order + 1):
            if m:
                dq = divide(dq, pochhammer(m, 1, 1, q_order))
            cols.append(dq.shift(m * (m + 1) // 2) * (-1 if m % 2 else 1))
        return BiSeries.from_columns(cols, x_order, q_order)
    table = np.empty((x_order + 1, q_order + 1), dtype=object)
    table.fill(0)
    table[0, 0] = 1
    for j in range(1, n + 1):
        # multiply by (1 - x q^j): row m gets -q^j * row (m-1)
        new = table.copy()
        if j <= q_order:
            new[1:, j:] -= table[:-1, : q_order + 1 - j]
        table = new
    return BiSeries._wrap(table)


def xq_pochhammer_inverse(x_order: int, q_order: int) -> BiSeries:
    """``1/(xq;q)_inf = sum_m x^m q^m / (q;q)_m``."""
    cols = []
    dq = IntSeries.one(q_order)
    for m in range(x_order + 1):
        if m:
            dq = divide(dq, pochhammer(m, 1, 1, q_order))
        cols.append(dq.shift(m))
    return BiSeries.from_columns(cols, x_order, q_order)


def lbar_bivariate(k: int, x_order: int, q_order: int) -> BiSeries:
    """``Lbar_k(x;q) = (xq;q)_inf Gbar_k(x;q)``: the x-graded double sum."""
    return double_sum(k, q_order, sign_on="s", x_order=x_order)


def gbar_bivariate(k: int, x_order: int, q_order: int) -> BiSeries:
    """Coefficient of ``x^l q^n`` is the number of k-run overpartitions of ``n`` with ``l`` parts."""
    return xq_pochhammer_inverse(x_order, q_order) * lbar_bivariate(k, x_order, q_order)


def _one_minus_xqj(j: int, x_order: int, q_order: int) -> BiSeries:
    table = np.empty((x_order + 1, q_order + 1), dtype=object)
    table.fill(0)
    table[0, 0] = 1
    if x_order >= 1 and j <= q_order:
        table[1, j] = -1
    return BiSeries._wrap(table)


def check_gbar_difference(k: int, gbar: BiSeries) -> VerificationReport:
    """``G(x) = G(xq)/(1-xq) + x^k q^(k(k+1)/2) G(xq^(k+1)) / (xq;q)_k``."""
    M, N = gbar.x_order, gbar.q_order
    first = gbar.substitute_xq(1) * _one_minus_xqj(1, M, N).invert()
    second = (
        gbar.substitute_xq(k + 1) * xq_pochhammer(M, N, k).invert()
    ).shift(k, k * (k + 1) // 2)
    return compare(f"Gbar q-difference k={k}", gbar, first + second)


def check_lbar_difference(k: int, lbar: BiSeries) -> VerificationReport:
    """``L(x) - L(xq) = x^k q^(k(k+1)/2) (1 - x q^(k+1)) L(xq^(k+1))``."""
    M, N = lbar.x_order, lbar.q_order
    lhs = lbar - lbar.substitute_xq(1)
    rhs = (_one_minus_xqj(k + 1, M, N) * lbar.substitute_xq(k + 1)).shift(k, k * (k + 1) // 2)
    return compare(f"Lbar q-difference k={k}", lhs, rhs)


def check_q_difference(k: int, x_order: int, q_order: int, gbar: BiSeries | None = None) -> VerificationReport:
    """Check both q-difference equations.

    ``Lbar`` is derived from ``gbar`` as ``(xq;q)_inf * gbar`` so a fault in
    ``gbar`` (e.g. a deliberately perturbed coefficient) shows up in both.
    """
    if gbar is None:
        gbar = gbar_bivariate(k, x_order, q_order)
    lbar = xq_pochhammer(gbar.x_order, gbar.q_order) * gbar
    reports = [check_gbar_difference(k, gbar), check_lbar_difference(k, lbar)]
    name = f"q-difference k={k}"
    order = (gbar.x_order, gbar.q_order)
    for rep in reports:
        if not rep.passed:
            return VerificationReport(
                name, order, "fail", rep.first_mismatch, rep.lhs_coeff, rep.rhs_coeff,
                details={"failed_equation": rep.identity_name},
            )
    return VerificationReport(name, order, "pass")


def lambda_coeffs(k: int, m_max: int, order: int) -> list[IntSeries]:
    """``lambda_m(q)`` for ``m <= m_max`` from the first-order recurrence

        (1 - q^m) lambda_m = q^(m(k+1) - k(k+1)/2) (lambda_(m-k) - lambda_(m-k-1))

    seeded by ``lambda_0 = 1``, ``lambda_1..lambda_(k-1) = 0`` and
    ``lambda_k = q^(k(k+1)/2) / (1 - q^k)``.
    """
    half = k * (k + 1) // 2
    zero = IntSeries.zero(order)
    lam: list[IntSeries] = []
    for m in range(m_max + 1):
        if m == 0:
            lam.append(IntSeries.one(order))
        elif m < k:
            lam.append(zero)
        elif m == k:
            lam.append(IntSeries.geometric(k, order).shift(half))
        else:
            prev = lam[m - k] - (lam[m - k - 1] if m - k - 1 >= 0 else zero)
            rhs = prev.shift(m * (k + 1) - half)
            lam.append(divide(rhs, pochhammer(m, 1, 1, order)))
    return lam


def check_lambda_recurrence(k: int, m_max: int, order: int) -> VerificationReport:
    """Recurrence output against the x-rows of ``(xq;q)_inf * Gbar_k(x;q)``."""
    lam = lambda_coeffs(k, m_max, order)
    rec = BiSeries.from_columns(lam, m_max, order)
    lbar = xq_pochhammer(m_max, order) * gbar_bivariate(k, m_max, order)
    return compare(f"lambda recurrence k={k}", rec, lbar)


# ---------------------------------------------------------------------------
# mock theta functions and Fine's bracket


def phi_series(order: int) -> IntSeries:
    """``sum_{n>=0} q^(n^2) / (-q^2;q^2)_n``."""
    total = IntSeries.one(order)
    den = IntSeries.one(order)
    n = 1
    while n * n <= order:
        den = divide(den, pochhammer(2 * n, 1, 1, order, sign=-1))
        total = total + den.shift(n * n)
        n += 1
    return total


def chi_series(order: int) -> IntSeries:
    """``sum_{n>=0} q^(n^2) / prod_{j<=n} (1 - q^j + q^(2j))``."""
    total = IntSeries.one(order)
    den = IntSeries.one(order)
    n = 1
    while n * n <= order:
        f = _zeros(order + 1)
        f[0] = 1
        f[n] -= 1
        if 2 * n <= order:
            f[2 * n] += 1
        den = divide(den, IntSeries._wrap(f))
        total = total + den.shift(n * n)
        n += 1
    return total


def fine_bracket_series(order: int) -> IntSeries:
    """``1 + 2 sum_{n>=1} q^n/(1-q^n) prod_{j<n} (1+q^(2j))/(1-q^j)``."""
    total = _zeros(order + 1)
    total[0] = 1
    prod = _zeros(order + 1)
    prod[0] = 1
    for n in range(1, order + 1):
        if n > 1:
            j = n - 1
            prod = mul_one_minus_qm(prod[: order - n + 1 + 1], 2 * j, sign=-1)
            prod = div_one_minus_qm(prod, j)
        prod = prod[: order - n + 1]
        term = div_one_minus_qm(prod, n)
        total[n:] += 2 * term
    return IntSeries._wrap(total)


def check_gbar1_fine(order: int, gbar1: IntSeries | None = None) -> VerificationReport:
    lhs = gbar_series(1, order) if gbar1 is None else gbar1
    return compare("Gbar_1 = Fine bracket", lhs, fine_bracket_series(order))


def check_gbar1_phi(order: int, phi: IntSeries | None = None) -> VerificationReport:
    """``Gbar_1 = (q;q)_inf * phi`` with phi as literally defined.

    Informational only: the report carries the first ten coefficients of
    both sides whenever they disagree.
    """
    phi = phi_series(order) if phi is None else phi
    rhs = pochhammer(1, 1, None, order) * phi
    return compare(
        "Gbar_1 = (q;q)_inf * phi", gbar_series(1, order), rhs, informational=True, head=10
    )


def check_g2_chi(order: int, g2: IntSeries | None = None) -> VerificationReport:
    """``G_2 = (-q^3;q^3)_inf / (q^2;q^2)_inf * chi``."""
    lhs = gk_series(2, order) if g2 is None else g2
    num = pochhammer(3, 3, None, order, sign=-1)
    rhs = divide(num * chi_series(order), pochhammer(2, 2, None, order))
    return compare("G_2 = (-q^3;q^3)_inf/(q^2;q^2)_inf * chi", lhs, rhs)
