"""Exact truncated power series in q, and in (b, q).

A series of order ``N`` keeps the coefficients of q^0 .. q^N. Coefficients
are Python ints, but every constructed value is checked against the signed
64-bit range and :class:`SeriesOverflowError` is raised instead of letting a
value escape that range.

Operands of a binary operation must share the same order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .partitions import iter_box_partitions

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


class SeriesOverflowError(OverflowError):
    """A coefficient left the signed 64-bit range."""


class OrderMismatchError(ValueError):
    """Two series of different truncation order were combined."""


class NonUnitError(ValueError):
    """Attempted to invert a series whose constant term is not +1 or -1."""


def _check_range(values: Iterable[int], where: str):
    for v in values:
        if v > INT64_MAX or v < INT64_MIN:
            raise SeriesOverflowError(f"coefficient {v} overflows int64 in {where}")


def _check_order(a, b):
    if a.order != b.order:
        raise OrderMismatchError(f"order mismatch: {a.order} vs {b.order}")


# Low-level helpers on mutable coefficient lists. They work in place and are
# shared by Series and BivariateSeries (via one list per b-degree row).


def _div_one_minus_inplace(c: list, k: int):
    """c <- c / (1 - q^k), truncated to len(c)."""
    for n in range(k, len(c)):
        c[n] += c[n - k]


def _mul_one_minus_inplace(c: list, k: int):
    """c <- c * (1 - q^k), truncated to len(c)."""
    for n in range(len(c) - 1, k - 1, -1):
        c[n] -= c[n - k]


@dataclass(frozen=True)
class Series:
    """Truncated univariate power series with exact integer coefficients."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(self.coeffs)
        if not coeffs:
            raise ValueError("a series keeps at least the constant term")
        _check_range(coeffs, "Series")
        object.__setattr__(self, "coeffs", coeffs)

    # construction

    @classmethod
    def zero(cls, order: int) -> "Series":
        return cls((0,) * (order + 1))

    @classmethod
    def one(cls, order: int) -> "Series":
        return cls.monomial(1, 0, order)

    @classmethod
    def monomial(cls, coeff: int, degree: int, order: int) -> "Series":
        c = [0] * (order + 1)
        if 0 <= degree <= order:
            c[degree] = coeff
        return cls(tuple(c))

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[int], order: int) -> "Series":
        """Pad with zeros or truncate ``coeffs`` to the given order."""
        c = list(coeffs[: order + 1])
        c.extend([0] * (order + 1 - len(c)))
        return cls(tuple(c))

    # accessors

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, order: int) -> "Series":
        if order > self.order:
            raise OrderMismatchError(f"cannot extend order {self.order} to {order}")
        return Series(self.coeffs[: order + 1])

    # ring operations

    def __add__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        _check_order(self, other)
        return Series(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        _check_order(self, other)
        return Series(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return Series(tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return Series(tuple(other * a for a in self.coeffs))
        if not isinstance(other, Series):
            return NotImplemented
        _check_order(self, other)
        N = self.order
        out = [0] * (N + 1)
        rhs = other.coeffs
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j in range(N + 1 - i):
                b = rhs[j]
                if b:
                    out[i + j] += a * b
        return Series(tuple(out))

    __rmul__ = __mul__

    def shift(self, degree: int) -> "Series":
        """Multiply by q^degree (degree >= 0), truncating."""
        if degree < 0:
            raise ValueError("shift degree must be nonnegative")
        N = self.order
        if degree > N:
            return Series.zero(N)
        return Series((0,) * degree + self.coeffs[: N + 1 - degree])

    def div_one_minus(self, k: int, times: int = 1) -> "Series":
        """Multiply by 1/(1 - q^k)^times using the linear recurrence."""
        if k < 1:
            raise ValueError("k must be positive")
        c = list(self.coeffs)
        for _ in range(times):
            _div_one_minus_inplace(c, k)
        return Series(tuple(c))

    def mul_one_minus(self, k: int) -> "Series":
        """Multiply by (1 - q^k)."""
        c = list(self.coeffs)
        _mul_one_minus_inplace(c, k)
        return Series(tuple(c))

    def to_json(self) -> list[str]:
        """Coefficients as decimal strings, lowest degree first."""
        return [str(a) for a in self.coeffs]

    def __str__(self):
        terms = []
        for n, a in enumerate(self.coeffs):
            if a:
                terms.append(f"{a}" if n == 0 else f"{a}*q^{n}")
        return " + ".join(terms) if terms else "0"


def add(lhs: Series, rhs: Series) -> Series:
    return lhs + rhs


def subtract(lhs: Series, rhs: Series) -> Series:
    return lhs - rhs


def multiply(lhs: Series, rhs: Series) -> Series:
    """Cauchy product truncated at the common order."""
    return lhs * rhs


def negate(s: Series) -> Series:
    return -s


def geometric(k: int, order: int) -> Series:
    """Truncation of q^k / (1 - q^k): ones at every positive multiple of k."""
    if k < 1:
        raise ValueError("k must be positive")
    c = [0] * (order + 1)
    for n in range(k, order + 1, k):
        c[n] = 1
    return Series(tuple(c))


def reciprocal_unit(s: Series) -> Series:
    """Multiplicative inverse of a series with constant term +1 or -1."""
    c0 = s.coeffs[0]
    if c0 not in (1, -1):
        raise NonUnitError(f"constant term {c0} is not a unit")
    N = s.order
    out = [0] * (N + 1)
    out[0] = c0
    for n in range(1, N + 1):
        acc = 0
        for i in range(1, n + 1):
            if s.coeffs[i]:
                acc += s.coeffs[i] * out[n - i]
        # c0 = +-1, so dividing by c0 is multiplying by it
        out[n] = -acc * c0
    return Series(tuple(out))


def pochhammer(k: int, order: int, with_b: bool = False):
    """(q;q)_k as a Series, or (bq;q)_k as a BivariateSeries when ``with_b``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if with_b:
        result = BivariateSeries.one(order)
        for i in range(1, k + 1):
            result = result.mul_one_minus_bq(i)
        return result
    c = [0] * (order + 1)
    c[0] = 1
    for i in range(1, k + 1):
        _mul_one_minus_inplace(c, i)
    return Series(tuple(c))


def _box_rows(rows: int, width: int, order: int, with_b: bool) -> list:
    """Generating function of partitions in a ``rows`` x ``width`` box.

    Splits the box by whether the partition uses all ``rows`` rows: if it
    does, removing its first column (``rows`` cells, lowering lambda_1 by
    one) leaves a partition in a ``rows`` x ``width - 1`` box; otherwise it
    fits a ``(rows - 1)`` x ``width`` box. Returns plain coefficients, or one
    list of b-coefficients per q-degree when ``with_b`` (b marks lambda_1).
    """
    def unit():
        if with_b:
            return [[1]] + [[0] * (n + 1) for n in range(1, order + 1)]
        return [1] + [0] * order

    # table[w] holds the box (r, w) for the current r
    table = [unit() for _ in range(width + 1)]
    for r in range(1, rows + 1):
        new = [unit()]
        for w in range(1, width + 1):
            prev_r = table[w]      # box (r - 1, w)
            same_r = new[w - 1]    # box (r, w - 1), to be shifted by b q^r
            if with_b:
                cell = [list(row) for row in prev_r]
                for n in range(r, order + 1):
                    src = same_r[n - r]
                    dst = cell[n]
                    for d, v in enumerate(src):
                        if v:
                            dst[d + 1] += v
            else:
                cell = list(prev_r)
                for n in range(r, order + 1):
                    cell[n] += same_r[n - r]
            new.append(cell)
        table = new
    return table[width]


def q_binomial(m: int, k: int, order: int) -> Series:
    """Gaussian binomial [m choose k] truncated at ``order``.

    Computed as the generating function of partitions inside a k x (m - k)
    box. Returns 0 when k < 0 or k > m; k = 0 (and k = m) give 1.
    """
    if m < 0 or k < 0 or k > m:
        return Series.zero(order)
    return Series(tuple(_box_rows(k, m - k, order, with_b=False)))


def q_binomial_from_pochhammer(m: int, k: int, order: int) -> Series:
    """(q;q)_m / ((q;q)_k (q;q)_{m-k}) through :func:`reciprocal_unit`.

    Independent cross-check of :func:`q_binomial`; exact whenever the
    order covers the polynomial degree k(m-k) or the caller only needs
    the truncation.
    """
    if m < 0 or k < 0 or k > m:
        return Series.zero(order)
    den = pochhammer(k, order) * pochhammer(m - k, order)
    return pochhammer(m, order) * reciprocal_unit(den)


def q_binomial_box_enumeration(m: int, k: int, order: int) -> Series:
    """Literal box enumeration of the Gaussian binomial (slow oracle)."""
    if m < 0 or k < 0 or k > m:
        return Series.zero(order)
    c = [0] * (order + 1)
    for lam in iter_box_partitions(k, m - k):
        w = sum(lam)
        if w <= order:
            c[w] += 1
    return Series(tuple(c))


def q_binomial_b(t: int, k: int, order: int) -> "BivariateSeries":
    """(q,b)-binomial: sum of b^{lambda_1} q^{|lambda|} over lambda in a k x (t - k) box.

    Zero when k < 0 or k > t; the box of size 0 x t holds only the empty
    partition, so k = 0 gives 1 just like :func:`q_binomial`.
    """
    if t < 0 or k < 0 or k > t:
        return BivariateSeries.zero(order)
    return BivariateSeries(tuple(tuple(row) for row in _box_rows(k, t - k, order, with_b=True)))


def q_binomial_b_box_enumeration(t: int, k: int, order: int) -> "BivariateSeries":
    """Literal enumeration version of :func:`q_binomial_b` (slow oracle)."""
    if t < 0 or k < 0 or k > t:
        return BivariateSeries.zero(order)
    rows = [[0] * (n + 1) for n in range(order + 1)]
    for lam in iter_box_partitions(k, t - k):
        w = sum(lam)
        if w <= order:
            rows[w][lam[0] if lam else 0] += 1
    return BivariateSeries(tuple(tuple(r) for r in rows))


@dataclass(frozen=True)
class BivariateSeries:
    """Truncated series in q whose q^n coefficient is an integer polynomial in b.

    ``coeffs[n][d]`` is the coefficient of b^d q^n; row n has exactly n + 1
    entries, so the b-degree never exceeds the q-degree.
    """

    coeffs: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.coeffs)
        if not rows:
            raise ValueError("a series keeps at least the constant term")
        for n, row in enumerate(rows):
            if len(row) != n + 1:
                raise ValueError(f"row {n} must hold b-degrees 0..{n}, got {len(row)} entries")
            _check_range(row, "BivariateSeries")
        object.__setattr__(self, "coeffs", rows)

    @classmethod
    def zero(cls, order: int) -> "BivariateSeries":
        return cls(tuple((0,) * (n + 1) for n in range(order + 1)))

    @classmethod
    def one(cls, order: int) -> "BivariateSeries":
        return cls.monomial(1, 0, 0, order)

    @classmethod
    def monomial(cls, coeff: int, q_degree: int, b_degree: int, order: int) -> "BivariateSeries":
        if b_degree > q_degree:
            raise ValueError("b-degree may not exceed q-degree")
        rows = [[0] * (n + 1) for n in range(order + 1)]
        if 0 <= q_degree <= order:
            rows[q_degree][b_degree] = coeff
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def from_series(cls, s: Series) -> "BivariateSeries":
        """Embed a b-free series."""
        return cls(tuple((a,) + (0,) * n for n, a in enumerate(s.coeffs)))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, q_degree: int, b_degree: int) -> int:
        row = self.coeffs[q_degree]
        return row[b_degree] if b_degree < len(row) else 0

    def truncate(self, order: int) -> "BivariateSeries":
        if order > self.order:
            raise OrderMismatchError(f"cannot extend order {self.order} to {order}")
        return BivariateSeries(self.coeffs[: order + 1])

    def _rows(self) -> list[list[int]]:
        return [list(r) for r in self.coeffs]

    def __add__(self, other):
        if not isinstance(other, BivariateSeries):
            return NotImplemented
        _check_order(self, other)
        return BivariateSeries(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other):
        if not isinstance(other, BivariateSeries):
            return NotImplemented
        _check_order(self, other)
        return BivariateSeries(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self):
        return BivariateSeries(tuple(tuple(-a for a in r) for r in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return BivariateSeries(tuple(tuple(other * a for a in r) for r in self.coeffs))
        if not isinstance(other, BivariateSeries):
            return NotImplemented
        _check_order(self, other)
        N = self.order
        out = [[0] * (n + 1) for n in range(N + 1)]
        for n1, r1 in enumerate(self.coeffs):
            nz1 = [(d, a) for d, a in enumerate(r1) if a]
            if not nz1:
                continue
            for n2 in range(N + 1 - n1):
                nz2 = [(d, a) for d, a in enumerate(other.coeffs[n2]) if a]
                if not nz2:
                    continue
                dst = out[n1 + n2]
                for d1, a in nz1:
                    for d2, b in nz2:
                        dst[d1 + d2] += a * b
        return BivariateSeries(tuple(tuple(r) for r in out))

    __rmul__ = __mul__

    def shift(self, q_degree: int, b_degree: int = 0) -> "BivariateSeries":
        """Multiply by b^b_degree q^q_degree (requires b_degree <= q_degree)."""
        if q_degree < 0 or b_degree < 0 or b_degree > q_degree:
            raise ValueError("need 0 <= b_degree <= q_degree")
        N = self.order
        rows = [[0] * (n + 1) for n in range(N + 1)]
        for n in range(q_degree, N + 1):
            src = self.coeffs[n - q_degree]
            rows[n][b_degree : b_degree + len(src)] = src
        return BivariateSeries(tuple(tuple(r) for r in rows))

    def div_one_minus(self, k: int, times: int = 1) -> "BivariateSeries":
        """Multiply by 1/(1 - q^k)^times."""
        rows = self._rows()
        for _ in range(times):
            for n in range(k, len(rows)):
                dst = rows[n]
                for d, v in enumerate(rows[n - k]):
                    if v:
                        dst[d] += v
        return BivariateSeries(tuple(tuple(r) for r in rows))

    def div_one_minus_bq(self, k: int) -> "BivariateSeries":
        """Multiply by 1/(1 - b q^k)."""
        rows = self._rows()
        for n in range(k, len(rows)):
            dst = rows[n]
            for d, v in enumerate(rows[n - k]):
                if v:
                    dst[d + 1] += v
        return BivariateSeries(tuple(tuple(r) for r in rows))

    def mul_one_minus_bq(self, k: int) -> "BivariateSeries":
        """Multiply by (1 - b q^k)."""
        rows = self._rows()
        for n in range(len(rows) - 1, k - 1, -1):
            dst = rows[n]
            for d, v in enumerate(rows[n - k]):
                if v:
                    dst[d + 1] -= v
        return BivariateSeries(tuple(tuple(r) for r in rows))

    def at_b_one(self) -> Series:
        return Series(tuple(sum(r) for r in self.coeffs))

    def to_json(self) -> list[list[str]]:
        """One array per q-degree, holding b-degree coefficients as decimal strings."""
        return [[str(a) for a in r] for r in self.coeffs]


def evaluate_b_at_one(s: BivariateSeries) -> Series:
    """Substitute b = 1."""
    return s.at_b_one()


def series_digest_payload(s) -> str:
    """Canonical JSON text of a series, for hashing."""
    return json.dumps(s.to_json(), separators=(",", ":"))
