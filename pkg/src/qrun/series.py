"""Truncated formal power series with exact integer coefficients.

Two containers live here:

* :class:`IntSeries` -- univariate series in ``q`` kept to ``q^N``.
* :class:`BiSeries`  -- polynomial in ``x`` (degree ``<= M``) whose
  coefficients are :class:`IntSeries` in ``q`` kept to ``q^N``.

Coefficients are Python integers held in numpy ``object`` arrays, so the
vectorised slice arithmetic runs at C loop speed while staying exact.
Every value is immutable once built; arithmetic truncates eagerly to the
smaller of the operand orders.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "IntSeries",
    "BiSeries",
    "NonUnitConstantTerm",
    "NonIntegerQuotient",
    "add",
    "mul",
    "invert",
    "divide",
    "pochhammer",
    "euler_inverse",
    "pentagonal_terms",
    "bi_mul",
    "bi_monomial",
    "bi_substitute_x1",
    "bi_coefficient",
]


class NonUnitConstantTerm(ArithmeticError):
    """Raised when inverting a series whose constant term is not +1 or -1."""


class NonIntegerQuotient(ArithmeticError):
    """Raised when an exact series division would leave a non-integer coefficient."""


def _zeros(n: int) -> np.ndarray:
    out = np.empty(n, dtype=object)
    out.fill(0)
    return out


def _as_object_array(coeffs: Iterable[int]) -> np.ndarray:
    arr = np.array([int(c) for c in coeffs], dtype=object)
    if arr.ndim != 1:
        arr = arr.reshape(-1)
    return arr


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def div_one_minus_qm(a: np.ndarray, m: int) -> np.ndarray:
    """Return ``a / (1 - q^m)`` as a new array of the same length.

    The recurrence ``b[i] = a[i] + b[i-m]`` is a cumulative sum along each
    residue class mod ``m``; reshaping turns it into one ``cumsum`` call.
    """
    n = len(a)
    if m <= 0:
        raise ValueError("m must be positive")
    if m >= n:
        return a.copy()
    rows = -(-n // m)
    padded = _zeros(rows * m)
    padded[:n] = a
    return np.cumsum(padded.reshape(rows, m), axis=0).reshape(-1)[:n]


def mul_one_minus_qm(a: np.ndarray, m: int, sign: int = 1) -> np.ndarray:
    """Return ``a * (1 - sign*q^m)`` as a new array of the same length."""
    out = a.copy()
    if m < len(a):
        out[m:] = a[m:] - sign * a[: len(a) - m]
    return out


class IntSeries:
    """Truncated power series ``sum_{i<=N} c_i q^i`` with integer ``c_i``."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Sequence[int] | np.ndarray, order: int | None = None):
        if isinstance(coeffs, np.ndarray) and coeffs.dtype == object and coeffs.ndim == 1:
            arr = coeffs.copy()
        else:
            arr = _as_object_array(coeffs)
        if order is not None:
            if order < 0:
                raise ValueError("truncation order must be non-negative")
            if len(arr) > order + 1:
                arr = arr[: order + 1].copy()
            elif len(arr) < order + 1:
                padded = _zeros(order + 1)
                padded[: len(arr)] = arr
                arr = padded
        if len(arr) == 0:
            raise ValueError("an IntSeries needs at least the constant coefficient")
        self._c = _frozen(arr)

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "IntSeries":
        # internal fast path: takes ownership of ``arr`` without copying
        obj = cls.__new__(cls)
        obj._c = _frozen(arr)
        return obj

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, order: int) -> "IntSeries":
        return cls._wrap(_zeros(order + 1))

    @classmethod
    def one(cls, order: int) -> "IntSeries":
        return cls.monomial(1, 0, order)

    @classmethod
    def monomial(cls, c: int, e: int, order: int) -> "IntSeries":
        arr = _zeros(order + 1)
        if 0 <= e <= order:
            arr[e] = int(c)
        return cls._wrap(arr)

    @classmethod
    def geometric(cls, step: int, order: int) -> "IntSeries":
        """``1/(1 - q^step)``."""
        arr = _zeros(order + 1)
        arr[::step] = 1
        return cls._wrap(arr)

    # -- accessors ---------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self._c) - 1

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(self._c)

    @property
    def array(self) -> np.ndarray:
        """Read-only view of the coefficient array."""
        return self._c

    def __len__(self) -> int:
        return len(self._c)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return list(self._c[i])
        return self._c[i]

    def __iter__(self):
        return iter(self._c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntSeries):
            return NotImplemented
        return len(self) == len(other) and bool(np.all(self._c == other._c))

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        head = ", ".join(str(c) for c in self._c[:8])
        more = ", ..." if len(self) > 8 else ""
        return f"IntSeries([{head}{more}], order={self.order})"

    def nonzero(self) -> np.ndarray:
        return np.flatnonzero(self._c != 0)

    def truncate(self, order: int) -> "IntSeries":
        if order >= self.order:
            return self
        return IntSeries._wrap(self._c[: order + 1].copy())

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            arr = self._c.copy()
            arr[0] += other
            return IntSeries._wrap(arr)
        if not isinstance(other, IntSeries):
            return NotImplemented
        n = min(len(self), len(other))
        return IntSeries._wrap(self._c[:n] + other._c[:n])

    __radd__ = __add__

    def __neg__(self) -> "IntSeries":
        return IntSeries._wrap(-self._c)

    def __sub__(self, other):
        if isinstance(other, int):
            return self + (-other)
        if not isinstance(other, IntSeries):
            return NotImplemented
        n = min(len(self), len(other))
        return IntSeries._wrap(self._c[:n] - other._c[:n])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return IntSeries._wrap(self._c * other)
        if not isinstance(other, IntSeries):
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def shift(self, e: int) -> "IntSeries":
        """Multiply by ``q^e`` (``e >= 0``), keeping the order."""
        if e < 0:
            raise ValueError("shift exponent must be non-negative")
        arr = _zeros(len(self))
        if e < len(self):
            arr[e:] = self._c[: len(self) - e]
        return IntSeries._wrap(arr)

    def dilate(self, m: int) -> "IntSeries":
        """Substitute ``q -> q^m``."""
        arr = _zeros(len(self))
        src = self._c[: self.order // m + 1]
        arr[:: m][: len(src)] = src
        return IntSeries._wrap(arr)

    def evaluate(self, q: float) -> float:
        """Horner evaluation of the truncated polynomial at a float ``q``."""
        acc = 0.0
        for c in reversed(self._c):
            acc = acc * q + float(c)
        return acc


def add(a: IntSeries, b: IntSeries) -> IntSeries:
    return a + b


def mul(a: IntSeries, b: IntSeries) -> IntSeries:
    """Truncated Cauchy product.

    Iterates over the nonzero coefficients of the sparser operand and adds
    shifted scaled copies of the other, so multiplying by a Pochhammer-type
    factor costs ``O(nnz * N)``.
    """
    n = min(len(a), len(b))
    x, y = a._c[:n], b._c[:n]
    nx, ny = np.flatnonzero(x != 0), np.flatnonzero(y != 0)
    if len(ny) < len(nx):
        x, y, nx = y, x, ny
    out = _zeros(n)
    for i in nx:
        i = int(i)
        out[i:] += x[i] * y[: n - i]
    return IntSeries._wrap(out)


def divide(a: IntSeries, b: IntSeries) -> IntSeries:
    """Exact series quotient ``a / b`` over the integers.

    Long division from the constant term; the work per coefficient is the
    number of nonzero coefficients of ``b``.  Raises
    :class:`NonIntegerQuotient` when a step is not divisible by ``b[0]``.
    """
    n = min(len(a), len(b))
    b0 = int(b._c[0])
    if b0 == 0:
        raise NonIntegerQuotient("divisor has zero constant term")
    nz = [(int(j), int(b._c[j])) for j in np.flatnonzero(b._c[:n] != 0) if j > 0]
    if len(nz) == 1 and nz[0][1] == -b0 and abs(b0) == 1:
        # 1 - q^m (up to a unit): one strided cumulative sum
        arr = div_one_minus_qm(a._c[:n], nz[0][0])
        return IntSeries._wrap(arr * b0)
    out = [0] * n
    src = a._c
    for i in range(n):
        acc = int(src[i])
        for j, c in nz:
            if j > i:
                break
            acc -= c * out[i - j]
        quo, rem = divmod(acc, b0)
        if rem:
            raise NonIntegerQuotient(f"coefficient {i}: {acc} not divisible by {b0}")
        out[i] = quo
    return IntSeries._wrap(np.array(out, dtype=object))


def invert(a: IntSeries) -> IntSeries:
    if abs(int(a._c[0])) != 1:
        raise NonUnitConstantTerm(f"constant term {a._c[0]} is not a unit")
    return divide(IntSeries.one(a.order), a)


def pochhammer(base_exp: int, step: int, n: int | float | None, order: int, sign: int = 1) -> IntSeries:
    """Expand ``(sign*q^base_exp; q^step)_n`` to ``q^order``.

    The product is ``prod_{j<n} (1 - sign*q^(base_exp + j*step))``; pass
    ``n=None`` (or ``math.inf``) for the infinite product, which is exact
    to ``q^order`` once factors beyond ``q^order`` are dropped.  ``sign=-1``
    gives the ``(-q^b; q^s)`` variants.
    """
    if base_exp < 1 or step < 1:
        raise ValueError("base_exp and step must be positive")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    count = math.inf if n is None else n
    arr = _zeros(order + 1)
    arr[0] = 1
    j = 0
    while j < count:
        e = base_exp + j * step
        if e > order:
            break
        arr = mul_one_minus_qm(arr, e, sign)
        j += 1
    return IntSeries._wrap(arr)


def pentagonal_terms(order: int) -> list[tuple[int, int]]:
    """Nonzero terms ``(exponent, sign)`` of ``(q;q)_inf`` up to ``q^order``."""
    terms = [(0, 1)]
    j = 1
    while True:
        g1 = j * (3 * j - 1) // 2
        if g1 > order:
            break
        sgn = -1 if j % 2 else 1
        terms.append((g1, sgn))
        g2 = j * (3 * j + 1) // 2
        if g2 <= order:
            terms.append((g2, sgn))
        j += 1
    return sorted(terms)


def euler_inverse(order: int) -> IntSeries:
    """``1/(q;q)_inf`` to ``q^order``: the partition numbers ``p(0..order)``.

    Uses Euler's pentagonal recurrence, ``O(order^1.5)`` integer additions.
    """
    pent = pentagonal_terms(order)[1:]
    p = [0] * (order + 1)
    p[0] = 1
    for n in range(1, order + 1):
        acc = 0
        for g, sgn in pent:
            if g > n:
                break
            acc -= sgn * p[n - g]
        p[n] = acc
    return IntSeries._wrap(np.array(p, dtype=object))


def divide_by_euler(a: IntSeries) -> IntSeries:
    """``a / (q;q)_inf`` by the sparse pentagonal recurrence."""
    pent = pentagonal_terms(a.order)[1:]
    src = a._c
    out = [0] * len(a)
    for n in range(len(a)):
        acc = int(src[n])
        for g, sgn in pent:
            if g > n:
                break
            acc -= sgn * out[n - g]
        out[n] = acc
    return IntSeries._wrap(np.array(out, dtype=object))


# ---------------------------------------------------------------------------
# bivariate


class BiSeries:
    """Series ``sum_{m<=M, n<=N} c[m, n] x^m q^n`` with integer coefficients.

    Backed by an ``(M+1, N+1)`` object array; row ``m`` is the
    :class:`IntSeries` coefficient of ``x^m``.
    """

    __slots__ = ("_c",)

    def __init__(self, table: np.ndarray | Sequence[Sequence[int]]):
        arr = np.array(table, dtype=object)
        if arr.ndim != 2:
            raise ValueError("BiSeries needs a 2-d coefficient table")
        self._c = _frozen(arr.copy())

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "BiSeries":
        obj = cls.__new__(cls)
        obj._c = _frozen(arr)
        return obj

    @classmethod
    def zero(cls, x_order: int, q_order: int) -> "BiSeries":
        arr = np.empty((x_order + 1, q_order + 1), dtype=object)
        arr.fill(0)
        return cls._wrap(arr)

    @classmethod
    def from_columns(cls, cols: Sequence[IntSeries], x_order: int, q_order: int) -> "BiSeries":
        arr = np.empty((x_order + 1, q_order + 1), dtype=object)
        arr.fill(0)
        for m, s in enumerate(cols[: x_order + 1]):
            n = min(len(s), q_order + 1)
            arr[m, :n] = s.array[:n]
        return cls._wrap(arr)

    @classmethod
    def from_intseries(cls, s: IntSeries, x_order: int) -> "BiSeries":
        return cls.from_columns([s], x_order, s.order)

    @property
    def x_order(self) -> int:
        return self._c.shape[0] - 1

    @property
    def q_order(self) -> int:
        return self._c.shape[1] - 1

    @property
    def table(self) -> np.ndarray:
        return self._c

    def __getitem__(self, key):
        return self._c[key]

    def coefficient(self, m: int) -> IntSeries:
        if m > self.x_order:
            raise IndexError(f"x-degree {m} beyond x_order {self.x_order}")
        return IntSeries._wrap(self._c[m].copy())

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiSeries):
            return NotImplemented
        return self._c.shape == other._c.shape and bool(np.all(self._c == other._c))

    def __repr__(self) -> str:
        return f"BiSeries(x_order={self.x_order}, q_order={self.q_order})"

    def _common(self, other: "BiSeries"):
        m = min(self.x_order, other.x_order) + 1
        n = min(self.q_order, other.q_order) + 1
        return self._c[:m, :n], other._c[:m, :n]

    def __add__(self, other):
        if not isinstance(other, BiSeries):
            return NotImplemented
        a, b = self._common(other)
        return BiSeries._wrap(a + b)

    def __sub__(self, other):
        if not isinstance(other, BiSeries):
            return NotImplemented
        a, b = self._common(other)
        return BiSeries._wrap(a - b)

    def __neg__(self):
        return BiSeries._wrap(-self._c)

    def __mul__(self, other):
        if isinstance(other, int):
            return BiSeries._wrap(self._c * other)
        if isinstance(other, BiSeries):
            return bi_mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def substitute_xq(self, j: int) -> "BiSeries":
        """Substitute ``x -> x q^j``: row ``m`` moves up by ``j*m`` in ``q``."""
        out = np.empty_like(self._c)
        out.fill(0)
        n = self.q_order + 1
        for m in range(self.x_order + 1):
            sh = j * m
            if sh < n:
                out[m, sh:] = self._c[m, : n - sh]
        return BiSeries._wrap(out)

    def shift(self, x_deg: int, q_deg: int) -> "BiSeries":
        """Multiply by ``x^x_deg q^q_deg``."""
        out = np.empty_like(self._c)
        out.fill(0)
        M, N = self._c.shape
        if x_deg < M and q_deg < N:
            out[x_deg:, q_deg:] = self._c[: M - x_deg, : N - q_deg]
        return BiSeries._wrap(out)

    def invert(self) -> "BiSeries":
        """Inverse in ``x``-adic order; the ``x^0`` row must be a unit series."""
        a0_inv = invert(self.coefficient(0))
        cols = [a0_inv]
        rows = [self.coefficient(m) for m in range(self.x_order + 1)]
        for m in range(1, self.x_order + 1):
            acc = IntSeries.zero(self.q_order)
            for i in range(1, m + 1):
                if rows[i].nonzero().size:
                    acc = acc + rows[i] * cols[m - i]
            cols.append(-(a0_inv * acc))
        return BiSeries.from_columns(cols, self.x_order, self.q_order)


def bi_mul(a: BiSeries, b: BiSeries) -> BiSeries:
    M = min(a.x_order, b.x_order)
    N = min(a.q_order, b.q_order)
    ra = [IntSeries._wrap(a.table[m, : N + 1].copy()) for m in range(M + 1)]
    rb = [IntSeries._wrap(b.table[m, : N + 1].copy()) for m in range(M + 1)]
    live_a = [m for m in range(M + 1) if ra[m].nonzero().size]
    live_b = [m for m in range(M + 1) if rb[m].nonzero().size]
    out = np.empty((M + 1, N + 1), dtype=object)
    out.fill(0)
    for i in live_a:
        for j in live_b:
            if i + j > M:
                break
            out[i + j] += (ra[i] * rb[j]).array
    return BiSeries._wrap(out)


def bi_monomial(c: int, x_deg: int, q_deg: int, x_order: int, q_order: int) -> BiSeries:
    out = np.empty((x_order + 1, q_order + 1), dtype=object)
    out.fill(0)
    if x_deg <= x_order and q_deg <= q_order:
        out[x_deg, q_deg] = int(c)
    return BiSeries._wrap(out)


def bi_substitute_x1(a: BiSeries) -> IntSeries:
    """Set ``x = 1``: sum the ``x``-coefficient rows."""
    return IntSeries._wrap(a.table.sum(axis=0))


def bi_coefficient(a: BiSeries, m: int) -> IntSeries:
    return a.coefficient(m)
