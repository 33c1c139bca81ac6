"""Special functions in double precision: dilogarithm, quantum dilogarithm, theta."""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

import numpy as np

__all__ = [
    "BranchCut",
    "DivergentInput",
    "dilog",
    "quantum_dilog",
    "quantum_dilog_array",
    "pochhammer_numeric",
    "theta",
    "theta_poisson",
    "li2_expansion_residual",
    "halving_ratios",
]


class BranchCut(ValueError):
    """The dilogarithm was asked for a value on its cut ``[1, inf)``."""


class DivergentInput(ValueError):
    """A series was evaluated outside its disc of convergence."""


def _bernoulli(n_max: int) -> list[Fraction]:
    # B_0..B_n_max with B_1 = -1/2
    b = [Fraction(0)] * (n_max + 1)
    for m in range(n_max + 1):
        a = [Fraction(0)] * (m + 1)
        for j in range(m + 1):
            a[j] = Fraction(1, j + 1)
            for i in range(j, 0, -1):
                a[i - 1] = i * (a[i - 1] - a[i])
        b[m] = a[0]
    b[1] = Fraction(-1, 2)
    return b


# coefficients B_n / (n+1)! of Li2(z) = sum_n B_n u^(n+1)/(n+1)!, u = -log(1-z)
_LI2_BERNOULLI = [float(bn / math.factorial(n + 1)) for n, bn in enumerate(_bernoulli(40))]

_PI2_6 = math.pi**2 / 6


def _li2_power(z: complex, tol: float) -> complex:
    acc, zn, n = 0j, z, 1
    while True:
        term = zn / (n * n)
        acc += term
        if abs(term) < tol * 1e-3 or n > 400:
            return acc
        n += 1
        zn *= z


def _li2_bernoulli(z: complex) -> complex:
    u = -cmath.log(1 - z)
    acc, un = 0j, u
    for n, c in enumerate(_LI2_BERNOULLI):
        if c:
            acc += c * un
        un *= u
    return acc


def dilog(z: complex, tol: float = 1e-15) -> complex:
    """``Li_2(z) = sum z^n / n^2`` continued to the cut plane.

    The power series is summed directly for ``|z| <= 1/2``.  Elsewhere the
    argument is moved with inversion ``z -> 1/z`` and reflection
    ``z -> 1 - z`` into ``|z| <= 1, Re z <= 1/2``, where the Bernoulli
    series in ``-log(1-z)`` converges quickly.
    """
    z = complex(z)
    if z.imag == 0 and z.real >= 1:
        raise BranchCut(f"Li2 is not defined on the cut at z = {z.real}")
    if z == 0:
        return 0j
    if abs(z) <= 0.5:
        return _li2_power(z, tol)
    if abs(z) > 1:
        return -_PI2_6 - 0.5 * cmath.log(-z) ** 2 - dilog(1 / z, tol)
    if z.real > 0.5:
        return _PI2_6 - cmath.log(z) * cmath.log(1 - z) - dilog(1 - z, tol)
    return _li2_bernoulli(z)


def _terms_needed(absx: float, tol: float) -> int:
    if absx == 0:
        return 1
    return int(math.ceil(math.log(tol) / math.log(absx))) + 2


def quantum_dilog(x: complex, q: float, tol: float = 1e-16) -> complex:
    """``Li_2(x; q) = -log (x;q)_inf = sum_m x^m / (m (1 - q^m))`` for ``|x| < 1``."""
    x = complex(x)
    if abs(x) >= 1:
        raise DivergentInput(f"|x| = {abs(x)} >= 1")
    if not 0 < q < 1:
        raise ValueError("q must lie in (0, 1)")
    if x == 0:
        return 0j
    m = np.arange(1, _terms_needed(abs(x), tol * (1 - q)) + 1)
    den = -m * np.expm1(m * math.log(q))
    terms = np.power(x, m) / den
    return complex(math.fsum(terms.real[::-1]), math.fsum(terms.imag[::-1]))


def quantum_dilog_array(x: np.ndarray, q: float, tol: float = 1e-16) -> np.ndarray:
    """Vectorised :func:`quantum_dilog` over an array of arguments."""
    x = np.asarray(x, dtype=complex)
    absmax = float(np.max(np.abs(x))) if x.size else 0.0
    if absmax >= 1:
        raise DivergentInput(f"max |x| = {absmax} >= 1")
    n = _terms_needed(absmax, tol * (1 - q)) if absmax else 1
    m = np.arange(1, n + 1)
    inv = 1.0 / (-m * np.expm1(m * math.log(q)))
    acc = np.zeros_like(x)
    xm = np.ones_like(x)
    for c in inv:
        xm = xm * x
        acc += c * xm
    return acc


def pochhammer_numeric(x: complex, q: float, tol: float = 1e-17) -> complex:
    """Direct product ``(x; q)_inf``."""
    acc, qj = 1 + 0j, 1.0
    while abs(x) * qj > tol:
        acc *= 1 - x * qj
        qj *= q
    return acc


def theta(q: float, x: complex, tol: float = 1e-16) -> complex:
    """Jacobi theta ``sum_{n in Z} q^(n^2) x^n`` for ``0 < q < 1``, ``x != 0``."""
    if not 0 < q < 1:
        raise ValueError("q must lie in (0, 1)")
    x = complex(x)
    acc = 1 + 0j
    logq = math.log(q)
    lx = math.log(abs(x))
    n = 1
    while True:
        a = cmath.exp(n * n * logq + n * cmath.log(x))
        b = cmath.exp(n * n * logq - n * cmath.log(x))
        acc += a + b
        if n * n * logq + n * abs(lx) < math.log(tol) - 5:
            return acc
        n += 1


def theta_poisson(eps: float, u: complex, k: int = 1, tol: float = 1e-16) -> complex:
    """``theta(exp(-k(k+1) eps / 2); exp(2 pi i u))`` after Poisson summation:

        sqrt(2 pi / (eps k(k+1))) * sum_n exp(-2 pi^2 (n + u)^2 / (eps k(k+1)))
    """
    K = k * (k + 1)
    a = 2 * math.pi**2 / (eps * K)
    u = complex(u)
    n0 = -round(u.real)
    acc = cmath.exp(-a * (n0 + u) ** 2)
    d = 1
    while True:
        t1 = cmath.exp(-a * (n0 + d + u) ** 2)
        t2 = cmath.exp(-a * (n0 - d + u) ** 2)
        acc += t1 + t2
        if -a * ((d - 0.5) ** 2 - u.imag**2) < math.log(tol) - 5:
            break
        d += 1
    return math.sqrt(2 * math.pi / (eps * K)) * acc


def li2_expansion_residual(x: float, B: float, eps: float) -> float:
    """``|eps Li_2(e^(-B eps) x; e^(-eps)) - Li_2(x) - eps (B - 1/2) log(1 - x)|``, which is ``O(eps^2)``."""
    lhs = eps * quantum_dilog(math.exp(-B * eps) * x, math.exp(-eps))
    model = dilog(x) + eps * (B - 0.5) * math.log(1 - x)
    return abs(lhs - model)


def halving_ratios(x: float, B: float, eps0: float = 0.01, halvings: int = 3) -> list[float]:
    """``residual(eps) / residual(eps/2)`` along ``eps0, eps0/2, ...``; ``~4`` for a second-order error."""
    errs = [li2_expansion_residual(x, B, eps0 / 2**i) for i in range(halvings + 1)]
    return [a / b for a, b in zip(errs, errs[1:])]
