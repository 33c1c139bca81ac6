"""Named verification suites; each returns a list of :class:`VerificationReport`."""

from __future__ import annotations

from typing import Callable

from . import enumeration as en
from .qgen import (
    VerificationReport,
    check_g2_chi,
    check_gbar1_fine,
    check_gbar1_phi,
    check_lambda_recurrence,
    check_q_difference,
    gbar_series,
    gk_series,
)
from .series import IntSeries

SUITES = ("bijection", "qdiff", "lambda", "fine", "phi", "chi", "gk", "all")


def _exhaustive(name: str, bound: int, check: Callable[[int], tuple[bool, int, int]]) -> VerificationReport:
    """Run ``check(n)`` for ``n = 0..bound``; stop at the first failing ``n``."""
    for n in range(bound + 1):
        ok, lhs, rhs = check(n)
        if not ok:
            return VerificationReport(name, bound, "fail", n, lhs, rhs)
    return VerificationReport(name, bound, "pass")


def lower_upper_reports(n_max: int = 14, k_max: int = 3) -> list[VerificationReport]:
    out = []
    for k in range(1, k_max + 1):
        out.append(
            _exhaustive(
                f"lower = upper count k={k}",
                n_max,
                lambda n, k=k: (
                    (a := en.count_lower(n, k)) == (b := en.count_upper(n, k)),
                    a,
                    b,
                ),
            )
        )

        def shift_ok(n, k=k):
            lower = [lam for lam in en.enumerate_overpartitions(n) if en.is_lower_k_run(lam, k)]
            upper = {lam for lam in en.enumerate_overpartitions(n) if en.is_upper_k_run(lam, k)}
            images = set()
            for lam in lower:
                mu = en.lower_to_upper(lam, k)
                same_stats = (
                    mu.size == lam.size
                    and mu.num_parts == lam.num_parts
                    and mu.num_overlined == lam.num_overlined
                )
                if not same_stats or mu not in upper or en.upper_to_lower(mu, k) != lam:
                    return False, len(images), len(upper)
                images.add(mu)
            return images == upper, len(images), len(upper)

        out.append(_exhaustive(f"lower_to_upper bijection k={k}", n_max, shift_ok))
    return out


def _no_lone_overline(lam: en.Overpartition) -> bool:
    if not lam.entries:
        return True
    largest = lam.entries[0][0]
    return all(m >= 2 for v, m, bar in lam.entries if bar and v != largest)


def conjugation_reports(n_max: int = 16) -> list[VerificationReport]:
    def involution(n):
        bad = sum(1 for lam in en.enumerate_overpartitions(n) if en.conjugate(en.conjugate(lam)) != lam)
        return bad == 0, bad, 0

    def class_map(n):
        ops = list(en.enumerate_overpartitions(n))
        src = {en.conjugate(lam) for lam in ops if en.is_lower_k_run(lam, 1)}
        dst = {lam for lam in ops if _no_lone_overline(lam)}
        return src == dst, len(src), len(dst)

    fig = en.Overpartition.parse("6' + 4' + 1 + 1 + 1'")
    want = en.Overpartition.parse("5' + 2 + 2 + 2' + 1 + 1'")
    got = en.conjugate(fig)
    fig_report = (
        VerificationReport("conjugation figure example", fig.size, "pass")
        if got == want and en.is_lower_k_run(fig, 1)
        else VerificationReport("conjugation figure example", fig.size, "fail", 0, details={"got": str(got)})
    )
    return [
        _exhaustive("conjugation is an involution", n_max, involution),
        _exhaustive("conjugation maps 1-run class onto no-lone-overline class", n_max, class_map),
        fig_report,
    ]


def bijection_reports(n_max: int = 14, k_max: int = 3, conj_n_max: int = 16) -> list[VerificationReport]:
    return lower_upper_reports(n_max, k_max) + conjugation_reports(conj_n_max)


def qdiff_reports(x_order: int = 30, q_order: int = 120, k_max: int = 5) -> list[VerificationReport]:
    return [check_q_difference(k, x_order, q_order) for k in range(1, k_max + 1)]


def lambda_reports(m_max: int = 25, q_order: int = 120, k_max: int = 3) -> list[VerificationReport]:
    return [check_lambda_recurrence(k, m_max, q_order) for k in range(1, k_max + 1)]


def enumeration_series_report(name: str, series: IntSeries, oracle: Callable[[int], int], n_max: int) -> VerificationReport:
    def check(n):
        a, b = int(series[n]), oracle(n)
        return a == b, a, b

    return _exhaustive(name, n_max, check)


def gk_reports(n_max: int = 30, ks=(2, 3)) -> list[VerificationReport]:
    return [
        enumeration_series_report(
            f"G_{k} series = no-{k}-sequence count", gk_series(k, n_max),
            lambda n, k=k: en.count_no_k_sequence(n, k), n_max,
        )
        for k in ks
    ]


def gbar_enumeration_reports(n_max: int = 30, ks=(1, 2, 3)) -> list[VerificationReport]:
    return [
        enumeration_series_report(
            f"Gbar_{k} series = lower {k}-run count", gbar_series(k, n_max),
            lambda n, k=k: en.count_lower(n, k), n_max,
        )
        for k in ks
    ]


def run_suite(
    suite: str,
    *,
    order: int = 500,
    n_max: int = 14,
    x_order: int = 30,
    q_order: int = 120,
    inject_fault: bool = False,
) -> list[VerificationReport]:
    """Run one named suite (or ``all``).

    ``inject_fault`` perturbs one coefficient of ``Gbar_1`` before the Fine
    check, which must then fail; it exists to test the harness itself.
    """
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    chosen = SUITES[:-1] if suite == "all" else (suite,)
    reports: list[VerificationReport] = []
    for name in chosen:
        if name == "bijection":
            reports += bijection_reports(n_max, 3, n_max + 2)
        elif name == "qdiff":
            reports += qdiff_reports(x_order, q_order)
        elif name == "lambda":
            reports += lambda_reports(min(25, x_order), q_order)
        elif name == "fine":
            reports.append(check_gbar1_fine(order, _faulty_gbar1(order) if inject_fault else None))
        elif name == "phi":
            reports.append(check_gbar1_phi(min(order, 100)))
        elif name == "chi":
            reports.append(check_g2_chi(order))
        elif name == "gk":
            reports += gk_reports(min(order, 30))
    if inject_fault and "fine" not in chosen:
        reports.append(check_gbar1_fine(order, _faulty_gbar1(order)))
    return reports


def _faulty_gbar1(order: int) -> IntSeries:
    c = list(gbar_series(1, order).coeffs)
    c[min(7, order)] += 1
    return IntSeries(c)


def gating_passed(reports: list[VerificationReport]) -> bool:
    """True when every non-informational report passed."""
    return all(r.passed for r in reports if not r.informational)
