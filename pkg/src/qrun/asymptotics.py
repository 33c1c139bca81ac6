"""Numerics for H_k near q = 1 and the closed-form asymptotics of the counts.

Throughout ``q = exp(-eps)`` and ``K = k(k+1)``.  Large quantities are
carried as natural logarithms; :class:`AsymptoticEstimate` stores the log
and only exponentiates on request.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .specfun import dilog, quantum_dilog_array

__all__ = [
    "ConvergenceBudgetExceeded",
    "QuadratureNotConverged",
    "SaddleData",
    "AsymptoticEstimate",
    "CONTOUR_HEIGHT",
    "PREFACTORS",
    "saddle_data",
    "leading_exponent",
    "integrand_exponent",
    "taylor_exponent",
    "hk_numeric",
    "hk_series_value",
    "hk_contour",
    "calibrate_contour_prefactor",
    "hk_asymptote",
    "pbar_asymptote",
    "pk_log_asymptote",
    "p2_asymptote",
    "eta_asymptote",
    "ingham_asymptote",
    "gbar_difference_asymptote",
    "ingham_parameters",
    "bigint_log",
]

CONTOUR_HEIGHT = math.log(2) / (2 * math.pi)


class ConvergenceBudgetExceeded(RuntimeError):
    pass


class QuadratureNotConverged(RuntimeError):
    pass


@dataclass(frozen=True)
class SaddleData:
    """Critical point of the leading exponent and the values there."""

    k: int
    w: complex
    f_w: float
    f2_w: float
    contour_height: float

    def __post_init__(self):
        if not (self.f_w > 0 and self.f2_w < 0):
            raise ValueError("expected f(w) > 0 and f''(w) < 0")


def saddle_data(k: int) -> SaddleData:
    K = k * (k + 1)
    c = CONTOUR_HEIGHT
    return SaddleData(k, 1j * c, math.pi**2 / (12 * K), -8 * math.pi**2 / K, c)


@dataclass(frozen=True)
class AsymptoticEstimate:
    """A formula value kept as ``log_value``; ``value`` exponentiates it."""

    point: float
    log_value: float
    formula_id: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not math.isfinite(self.log_value):
            raise ValueError(f"non-finite log value for {self.formula_id}")

    @property
    def value(self) -> float:
        if self.log_value > 700:
            raise OverflowError(f"{self.formula_id} at {self.point} exceeds double range; use log_value")
        return math.exp(self.log_value)


def bigint_log(n: int) -> float:
    """Natural log of a positive integer of any size.

    Keeps the top 64 bits as a float mantissa and adds back the shift.
    """
    if n <= 0:
        raise ValueError("log of a non-positive integer")
    shift = max(n.bit_length() - 64, 0)
    return math.log(n >> shift) + shift * math.log(2)


# ---------------------------------------------------------------------------
# the contour integrand


def leading_exponent(k: int, u: complex) -> complex:
    """Coefficient of ``1/eps`` in the integrand exponent:
    ``(-2 pi^2 u^2 + Li2(exp(2 pi i u))) / K``."""
    K = k * (k + 1)
    return (-2 * math.pi**2 * u * u + dilog(cmath.exp(2j * math.pi * u))) / K


def integrand_exponent(k: int, eps: float, u):
    """Full exponent of the contour integrand at ``u`` (scalar or array).

    ``-2 pi^2 u^2/(eps K) + Li2(e^(2 pi i u); e^(-k eps))
    - Li2(e^(2 pi i u - (k+1) eps); e^(-(k+1) eps))``
    """
    K = k * (k + 1)
    u = np.asarray(u, dtype=complex)
    x = np.exp(2j * math.pi * u)
    gauss = -2 * math.pi**2 * u * u / (eps * K)
    a = quantum_dilog_array(x, math.exp(-k * eps))
    b = quantum_dilog_array(x * math.exp(-(k + 1) * eps), math.exp(-(k + 1) * eps))
    out = gauss + a - b
    return complex(out) if out.ndim == 0 else out


def taylor_exponent(k: int, eps: float, z: complex) -> complex:
    """Second-order model of the exponent at ``u = w + sqrt(eps) z``."""
    sd = saddle_data(k)
    return sd.f_w / eps + sd.f2_w * z * z / 2 - cmath.log(1 - cmath.exp(2j * math.pi * sd.w))


# Candidate constants in front of the line integral; selected by calibration.
PREFACTORS = {
    "sqrt(2pi/(eps K))": lambda eps, K: math.sqrt(2 * math.pi / (eps * K)),
    "sqrt(2pi^2/(eps K))": lambda eps, K: math.sqrt(2 * math.pi**2 / (eps * K)),
}
DEFAULT_PREFACTOR = "sqrt(2pi/(eps K))"


def _line_integral(k, eps, c, half_width, nodes):
    t = np.linspace(-half_width, half_width, nodes)
    h = t[1] - t[0]
    u = t + 1j * c
    # principal log(1 - x) is safe while Re(1 - x) > 0 along the line
    x = np.exp(2j * math.pi * u)
    if np.min((1 - x).real) <= 0:
        raise QuadratureNotConverged("contour crosses the branch cut of log(1 - x)")
    vals = np.exp(integrand_exponent(k, eps, u))
    w = np.full(nodes, h)
    w[0] = w[-1] = h / 2
    terms = vals * w
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def _half_width(k, eps, c):
    K = k * (k + 1)
    # |integrand| <= exp(-2 pi^2 (t^2 - c^2)/(eps K) + bound), bound from |x| = e^(-2 pi c)
    r = math.exp(-2 * math.pi * c)
    bound = (
        dilog(r).real / (k * eps) + dilog(r).real / ((k + 1) * eps) + 2 * abs(math.log(1 - r))
    )
    need = bound + 2 * math.pi**2 * c * c / (eps * K) + 45
    return math.sqrt(need * eps * K / (2 * math.pi**2))


def hk_contour(
    k: int,
    eps: float,
    *,
    c: float = CONTOUR_HEIGHT,
    half_width: float | None = None,
    nodes: int | None = None,
    rtol: float = 1e-12,
    max_nodes: int = 1 << 16,
    prefactor: str = DEFAULT_PREFACTOR,
) -> float:
    """``H_k(exp(-eps))`` as a line integral over ``R + i c``.

    Trapezoid rule on ``[-U, U]``: ``U`` is picked so the Gaussian factor
    has killed the integrand to ``~e^-45`` of any possible peak; the node
    count doubles until successive results agree to ``rtol`` (or is fixed
    when ``nodes`` is given).  The imaginary part vanishes by symmetry and
    is dropped.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if c <= 0:
        raise ValueError("contour height must be positive")
    K = k * (k + 1)
    U = _half_width(k, eps, c) if half_width is None else half_width
    pref = PREFACTORS[prefactor](eps, K)
    if nodes is not None:
        return pref * _line_integral(k, eps, c, U, nodes).real
    n = 129
    prev = _line_integral(k, eps, c, U, n)
    while n < max_nodes:
        n = 2 * n - 1
        cur = _line_integral(k, eps, c, U, n)
        if abs(cur - prev) <= rtol * abs(cur):
            return pref * cur.real
        prev = cur
    raise QuadratureNotConverged(f"no convergence with {n} nodes (k={k}, eps={eps})")


def calibrate_contour_prefactor(k: int = 1, eps: float = 0.3, rtol: float = 1e-6) -> dict:
    """Decide which candidate prefactor makes the contour integral equal ``H_k``.

    Returns a dict with the raw integral, the exact value and, per
    candidate, the relative error; ``"selected"`` names the candidate that
    matches within ``rtol`` (``None`` if none does).
    """
    exact = hk_numeric(k, eps)
    K = k * (k + 1)
    raw = hk_contour(k, eps, prefactor=DEFAULT_PREFACTOR) / PREFACTORS[DEFAULT_PREFACTOR](eps, K)
    errors = {name: abs(f(eps, K) * raw - exact) / exact for name, f in PREFACTORS.items()}
    ok = [name for name, e in errors.items() if e <= rtol]
    return {
        "k": k,
        "eps": eps,
        "exact": exact,
        "raw_integral": raw,
        "implied_prefactor": exact / raw,
        "relative_errors": errors,
        "selected": ok[0] if ok else None,
    }


# ---------------------------------------------------------------------------
# H_k by direct summation


def hk_numeric(k: int, eps: float, tol: float = 1e-13, max_terms: int = 2_000_000) -> float:
    """``H_k(exp(-eps))`` by summing the double series in multiprecision.

    The terms reach ``exp(pi^2/(6 k eps) + pi^2/(6 (k+1) eps))`` before
    cancelling, so the working precision grows like ``1/eps``; this is what
    makes small ``eps`` expensive (accurate and quick for ``eps >= 0.02``).
    Summation stops once ``q^e`` times that bound drops below ``tol``,
    which is a relative tolerance because ``H_k >= 1``.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    K = k * (k + 1)
    log_big = math.pi**2 / 6 * (1 / (k * eps) + 1 / ((k + 1) * eps))
    cutoff = log_big + math.log(1 / tol) + 10
    dps = 25 + int((log_big + math.log(1 / tol)) / math.log(10))
    with mpmath.workdps(dps):
        q = mpmath.exp(-mpmath.mpf(eps))
        qk, qk1 = q**k, q ** (k + 1)
        total = mpmath.mpf(0)
        inv_s = mpmath.mpf(1)
        terms = 0
        s = 0
        while True:
            e0 = K * s * s // 2 + (k + 1) * s * (s + 1) // 2
            if eps * e0 > cutoff:
                break
            if s:
                inv_s /= 1 - qk1**s
            cur = inv_s
            sign = -1 if s % 2 else 1
            r = 0
            while True:
                e = K * (r + s) ** 2 // 2 + (k + 1) * s * (s + 1) // 2
                if eps * e > cutoff:
                    break
                if r:
                    cur /= 1 - qk**r
                total += sign * cur * q**e
                terms += 1
                if terms > max_terms:
                    raise ConvergenceBudgetExceeded(f"more than {max_terms} terms at eps={eps}")
                r += 1
            s += 1
        return float(total)


def hk_series_value(k: int, eps: float, tol: float = 1e-13) -> float:
    """``H_k(exp(-eps))`` from exact coefficients of :func:`qgen.hk_series`.

    The order is doubled until the last coefficient block contributes less
    than ``tol``.
    """
    from .qgen import hk_series

    n = 64
    while True:
        coeffs = hk_series(k, n).coeffs
        with mpmath.workdps(30):
            q = mpmath.exp(-mpmath.mpf(eps))
            vals = [mpmath.mpf(c) * q**i for i, c in enumerate(coeffs)]
            total = mpmath.fsum(vals)
            tail = mpmath.fsum(abs(v) for v in vals[n // 2:])
            if tail < tol * abs(total):
                return float(total)
        n *= 2
        if n > 1 << 15:
            raise ConvergenceBudgetExceeded(f"series evaluation did not settle at eps={eps}")


# ---------------------------------------------------------------------------
# closed forms


def hk_asymptote(k: int, eps: float) -> AsymptoticEstimate:
    """``sqrt(2) exp(pi^2 / (12 K eps))``."""
    K = k * (k + 1)
    return AsymptoticEstimate(eps, 0.5 * math.log(2) + math.pi**2 / (12 * K * eps), "hk", {"k": k})


def pbar_asymptote(k: int, n: int) -> AsymptoticEstimate:
    """``sqrt(1 + 1/(2K)) / (2 sqrt(6) n) * exp(pi sqrt(2/3 (1 + 1/(2K)) n))``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    K = k * (k + 1)
    a = 1 + 1 / (2 * K)
    logv = (
        0.5 * math.log(a)
        - math.log(2 * math.sqrt(6) * n)
        + math.pi * math.sqrt(2 / 3 * a * n)
    )
    return AsymptoticEstimate(n, logv, "pbar", {"k": k})


def pk_log_asymptote(k: int, n: int) -> float:
    """Leading term of ``log p_k(n)``: ``pi sqrt(2/3 (1 - 2/K) n)``."""
    if k < 2 or n < 1:
        raise ValueError("need k >= 2 and n >= 1")
    K = k * (k + 1)
    return math.pi * math.sqrt(2 / 3 * (1 - 2 / K) * n)


def p2_asymptote(n: int) -> AsymptoticEstimate:
    """``exp(2 pi sqrt(n) / 3) / (4 sqrt(3) n^(3/4))``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    logv = 2 * math.pi * math.sqrt(n) / 3 - math.log(4 * math.sqrt(3)) - 0.75 * math.log(n)
    return AsymptoticEstimate(n, logv, "p2")


def eta_asymptote(eps: float) -> AsymptoticEstimate:
    """``(q;q)_inf ~ sqrt(2 pi / eps) exp(-pi^2 / (6 eps))``."""
    return AsymptoticEstimate(eps, 0.5 * math.log(2 * math.pi / eps) - math.pi**2 / (6 * eps), "eta")


def ingham_asymptote(lam: float, alpha: float, A: float, n: int) -> AsymptoticEstimate:
    """Partial-sum growth from ``f(z) ~ lam (-log z)^alpha exp(A / (-log z))``:

        lam / (2 sqrt(pi)) * A^(alpha/2 - 1/4) / n^(alpha/2 + 1/4) * exp(2 sqrt(A n))
    """
    if A <= 0 or lam <= 0 or n < 1:
        raise ValueError("need A > 0, lam > 0, n >= 1")
    logv = (
        math.log(lam / (2 * math.sqrt(math.pi)))
        + (alpha / 2 - 0.25) * math.log(A)
        - (alpha / 2 + 0.25) * math.log(n)
        + 2 * math.sqrt(A * n)
    )
    return AsymptoticEstimate(n, logv, "ingham", {"lam": lam, "alpha": alpha, "A": A})


def gbar_difference_asymptote(k: int, eps: float) -> AsymptoticEstimate:
    """``(1 - q) Gbar_k(q) ~ eps^(3/2) / sqrt(pi) * exp(pi^2 (1 + 1/(2K)) / (6 eps))``.

    Obtained as ``eps * H_k / (q;q)_inf`` from the two closed forms; feeding
    it to :func:`ingham_asymptote` (``lam = 1/sqrt(pi)``, ``alpha = 3/2``)
    gives :func:`pbar_asymptote` after telescoping.
    """
    K = k * (k + 1)
    A = math.pi**2 / 6 * (1 + 1 / (2 * K))
    logv = 1.5 * math.log(eps) - 0.5 * math.log(math.pi) + A / eps
    return AsymptoticEstimate(eps, logv, "gbar_difference", {"k": k, "A": A})


def ingham_parameters(k: int) -> dict:
    """``(lam, alpha, A)`` for applying Ingham's theorem to ``(1 - q) Gbar_k``."""
    K = k * (k + 1)
    return {"lam": 1 / math.sqrt(math.pi), "alpha": 1.5, "A": math.pi**2 / 6 * (1 + 1 / (2 * K))}
