"""Both sides of the divisor-function q-series identities and their b-refinements.

Every analytic left side carries the sign (-1)^(k-1) on its k-th term. With
(-1)^k the k = 1 term alone gives -q at degree 1 while every right side
starts with +q, so the builders use (-1)^(k-1) throughout; pass
``printed_sign=True`` to get the (-1)^k variant for regression purposes.

Infinite sums over k stop at the last k whose leading monomial
q^(k(k+1)/2 + (m-1)k) still lies within the truncation order.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Optional

from .partitions import (
    adjacent_equal_positions,
    corner_count,
    hook_length,
    iter_partitions,
    iter_strict_partitions,
)
from .qseries import (
    BivariateSeries,
    Series,
    geometric,
    q_binomial,
    q_binomial_b,
)

IDENTITIES = (
    "uchimura",
    "eq2",
    "problem6407",
    "thm32",
    "cor33",
    "thm41",
    "dilcher1",
    "dilcher2",
    "b_dilcher1",
    "b_dilcher2",
)

# parameters each identity needs; optional ones select a sub-range of a sweep
REQUIRED_PARAMS = {
    "uchimura": (),
    "eq2": (),
    "problem6407": ("t",),
    "thm32": (),
    "cor33": (),
    "thm41": ("m",),
    "dilcher1": ("m",),
    "dilcher2": ("m", "t"),
    "b_dilcher1": ("m",),
    "b_dilcher2": ("m", "t"),
}
ALLOWED_PARAMS = {
    "uchimura": (),
    "eq2": (),
    "problem6407": ("t",),
    "thm32": ("n", "k"),
    "cor33": ("n",),
    "thm41": ("m", "n", "k"),
    "dilcher1": ("m",),
    "dilcher2": ("m", "t"),
    "b_dilcher1": ("m",),
    "b_dilcher2": ("m", "t"),
}


class InvalidSpecError(ValueError):
    """An IdentitySpec is missing, or has out-of-range, parameters."""


def binom(a: int, b: int) -> int:
    """C(a, b) with C(a, b) = 0 for b < 0 or b > a."""
    if b < 0 or a < 0 or b > a:
        return 0
    return comb(a, b)


def _sign(k: int, printed_sign: bool) -> int:
    if printed_sign:
        return -1 if k % 2 else 1
    return 1 if k % 2 else -1


def _leading_exponent(k: int, m: int) -> int:
    return k * (k + 1) // 2 + (m - 1) * k


# --------------------------------------------------------------------------
# analytic sides


def dilcher_lhs(m: int, t: Optional[int], with_b: bool, order: int, printed_sign: bool = False):
    """Alternating k-sum of the Dilcher family; ``t=None`` means the infinite sum.

    Term k is b^k q^(k(k+1)/2 + (m-1)k) / (1 - q^k)^m times 1/(bq;q)_k
    (infinite t) or the (q,b)-binomial [t, k] (finite t). Without b the
    same shapes are built with (q;q)_k and the Gaussian binomial.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if t is not None and t < 1:
        raise ValueError("t must be >= 1")
    total = BivariateSeries.zero(order) if with_b else Series.zero(order)
    k = 1
    while (t is None or k <= t) and _leading_exponent(k, m) <= order:
        e = _leading_exponent(k, m)
        if with_b:
            if t is None:
                term = BivariateSeries.monomial(1, e, k, order)
                for i in range(1, k + 1):
                    term = term.div_one_minus_bq(i)
            else:
                term = q_binomial_b(t, k, order).shift(e, k)
        else:
            if t is None:
                term = Series.monomial(1, e, order)
                for i in range(1, k + 1):
                    term = term.div_one_minus(i)
            else:
                term = q_binomial(t, k, order).shift(e)
        term = term.div_one_minus(k, m)
        total = total + term if _sign(k, printed_sign) > 0 else total - term
        k += 1
    return total


def uchimura_lhs(order: int, printed_sign: bool = False) -> Series:
    """Sum over k of (-1)^(k-1) q^(k(k+1)/2) / ((q;q)_k (1 - q^k))."""
    return dilcher_lhs(1, None, False, order, printed_sign=printed_sign)


def problem6407_lhs(t: int, order: int) -> Series:
    """Sum over k = 1..t of (-1)^(k-1) [t, k] q^(k(k+1)/2) / (1 - q^k)."""
    return dilcher_lhs(1, t, False, order)


def divisor_rhs(order: int) -> Series:
    """Sum of q^k/(1 - q^k) for k >= 1; the q^n coefficient is sigma_0(n)."""
    return finite_divisor_rhs(max(order, 1), order)


def finite_divisor_rhs(t: int, order: int) -> Series:
    """Sum of q^k/(1 - q^k) for k = 1..t."""
    c = [0] * (order + 1)
    for k in range(1, min(t, order) + 1):
        for n in range(k, order + 1, k):
            c[n] += 1
    return Series(tuple(c))


def dilcher_rhs(m: int, t: Optional[int], with_b: bool, order: int):
    """Nested sum over t >= j_1 >= ... >= j_m >= 1 of b^{j_1} prod q^{j_i}/(1 - q^{j_i}).

    ``inner[j]`` holds the sum over levels below the current one with the
    level's index bounded by j; levels are folded from the innermost out,
    so each (level, bound) pair is computed once.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if t is not None and t < 1:
        raise ValueError("t must be >= 1")
    # every level contributes q-valuation >= 1
    top = order - (m - 1)
    if t is not None:
        top = min(top, t)
    top = max(top, 0)
    geo = [None] + [geometric(j, order) for j in range(1, top + 1)]

    # innermost level: prefix sums of the geometric terms
    inner = [Series.zero(order)]
    for j in range(1, top + 1):
        inner.append(inner[-1] + geo[j])
    for _level in range(m - 1):
        folded = [Series.zero(order)]
        for j in range(1, top + 1):
            folded.append(folded[-1] + _sparse_mul(geo[j], inner[j]))
        inner = folded

    if not with_b:
        return inner[top]
    # b^{j_1} tags the outermost index: peel it off again
    rows = [[0] * (n + 1) for n in range(order + 1)]
    for j in range(1, top + 1):
        layer = inner[j] - inner[j - 1]
        for n, v in enumerate(layer.coeffs):
            if v:
                rows[n][j] += v
    return BivariateSeries(tuple(tuple(r) for r in rows))


def _sparse_mul(sparse: Series, dense: Series) -> Series:
    N = sparse.order
    out = [0] * (N + 1)
    d = dense.coeffs
    for i, a in enumerate(sparse.coeffs):
        if a:
            for n in range(i, N + 1):
                out[n] += a * d[n - i]
    return Series(tuple(out))


# --------------------------------------------------------------------------
# combinatorial sides


def strict_signed_series(m: int, order: int, method: str = "grouped") -> Series:
    """Sum over strict partitions of (-1)^(length-1) C(smallest part, m) q^weight.

    ``method="grouped"`` groups strict partitions by their smallest part s:
    the remaining parts form any set of distinct values above s, each one
    flipping the sign, i.e. q^s * prod_{v > s} (1 - q^v).
    ``method="enumerate"`` walks every strict partition of weight <= order.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    c = [0] * (order + 1)
    if method == "enumerate":
        for n in range(1, order + 1):
            for lam in iter_strict_partitions(n):
                c[n] += (1 if len(lam) % 2 else -1) * binom(lam[-1], m)
        return Series(tuple(c))
    if method != "grouped":
        raise ValueError(f"unknown method {method!r}")
    above = [1] + [0] * order  # prod over v > s of (1 - q^v)
    for s in range(order, 0, -1):
        weight = binom(s, m)
        if weight:
            for n in range(s, order + 1):
                c[n] += weight * above[n - s]
        for n in range(order, s - 1, -1):
            above[n] -= above[n - s]
    return Series(tuple(c))


def rectangle_concat_rhs(m: int, order: int, method: str = "grouped") -> Series:
    """Sum over partitions of C(length - corners, m - corners) q^weight.

    ``method="grouped"`` works over part multiplicities: a value v used r
    times adds one corner and r - 1 adjacent-equal positions, and the
    binomial splits (Vandermonde) into per-value choices C(r - 1, j_v). A
    table indexed by (weight, corners + chosen positions) then only keeps
    the entries that can still reach m. ``method="enumerate"`` visits every
    partition of weight <= order.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if method == "enumerate":
        c = [0] * (order + 1)
        for n in range(1, order + 1):
            for lam in iter_partitions(n):
                cc = corner_count(lam)
                c[n] += binom(len(lam) - cc, m - cc)
        return Series(tuple(c))
    if method != "grouped":
        raise ValueError(f"unknown method {method!r}")
    table = [[0] * (m + 1) for _ in range(order + 1)]
    table[0][0] = 1
    for v in range(1, order + 1):
        new = [row[:] for row in table]
        for w in range(order + 1):
            row = table[w]
            for marks, ways in enumerate(row):
                if not ways:
                    continue
                for r in range(1, (order - w) // v + 1):
                    dst = new[w + v * r]
                    for j in range(0, min(r - 1, m - 1 - marks) + 1):
                        dst[marks + 1 + j] += ways * comb(r - 1, j)
        table = new
    return Series(tuple(table[n][m] for n in range(order + 1)))


def thm32_signed_count(n: int, k: int) -> int:
    """#odd-length minus #even-length strict partitions of n with lambda_1 >= k > lambda_1 - lambda_ell."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be >= 1")
    return _thm32_table(n).get(k, 0)


@lru_cache(maxsize=128)
def _thm32_table(n: int) -> dict[int, int]:
    # each lambda lies in D(n, k) exactly for lambda_1 - lambda_ell < k <= lambda_1
    out: dict[int, int] = {}
    for lam in iter_strict_partitions(n):
        sign = 1 if len(lam) % 2 else -1
        for k in range(lam[0] - lam[-1] + 1, lam[0] + 1):
            out[k] = out.get(k, 0) + sign
    return out


def thm41_lhs_table(n: int, m: int) -> dict[int, int]:
    """Signed count of tuples (lambda, i_1 < ... < i_m <= lambda_ell), keyed by a_{1,i_m}.

    Literal enumeration of the index tuples.
    """
    out: dict[int, int] = {}
    for lam in iter_strict_partitions(n):
        sign = 1 if len(lam) % 2 else -1
        for idx in combinations(range(1, lam[-1] + 1), m):
            k = lam[0] - idx[-1] + 1
            out[k] = out.get(k, 0) + sign
    return out


def thm41_lhs_closed(n: int, m: int, k: int) -> int:
    """Closed form of the signed tuple count.

    a_{1,i_m} = k pins i_m = lambda_1 - k + 1, which must lie in
    1..lambda_ell; the other m - 1 indices are any subset of the smaller
    positions.
    """
    total = 0
    for lam in iter_strict_partitions(n):
        if lam[0] >= k > lam[0] - lam[-1]:
            total += (1 if len(lam) % 2 else -1) * binom(lam[0] - k, m - 1)
    return total


def thm41_rhs_table(n: int, m: int) -> dict[int, int]:
    """Count of (lambda, t_1 < ... < t_{m-c}) with t_i adjacent-equal positions, keyed by lambda_1."""
    out: dict[int, int] = {}
    for lam in iter_partitions(n):
        cc = corner_count(lam)
        ways = binom(len(adjacent_equal_positions(lam)), m - cc)
        if ways:
            out[lam[0]] = out.get(lam[0], 0) + ways
    return out


def thm41_counts(n: int, m: int, k: int) -> tuple[int, int]:
    """(signed tuple count with a_{1,i_m} = k, rectangle count with lambda_1 = k)."""
    if n < 1 or m < 1 or k < 1:
        raise ValueError("n, m and k must be >= 1")
    lhs, rhs = _thm41_tables(n, m)
    return lhs.get(k, 0), rhs.get(k, 0)


@lru_cache(maxsize=256)
def _thm41_tables(n: int, m: int) -> tuple[dict[int, int], dict[int, int]]:
    # private cache; the public table functions hand out fresh dicts
    return thm41_lhs_table(n, m), thm41_rhs_table(n, m)


def cor33_counts(n: int) -> tuple[int, int]:
    """Odd and even row-1 hook lengths h_{1,i}, i <= smallest part, over strict partitions of n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    odd = even = 0
    for parts in iter_strict_partitions(n):
        for i in range(1, parts[-1] + 1):
            if hook_length(parts, 1, i) % 2:
                odd += 1
            else:
                even += 1
    return odd, even


# --------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class IdentitySpec:
    identity: str
    order: int = 50
    m: Optional[int] = None
    t: Optional[int] = None
    n: Optional[int] = None
    k: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "identity", normalize_identity(self.identity))

    def validate(self):
        ident = self.identity
        if ident not in IDENTITIES:
            raise InvalidSpecError(f"unknown identity {ident!r}")
        if self.order < 0:
            raise InvalidSpecError("order must be >= 0")
        for name in ("m", "t", "n", "k"):
            value = getattr(self, name)
            if value is None:
                if name in REQUIRED_PARAMS[ident]:
                    raise InvalidSpecError(f"{ident} requires --{name}")
                continue
            if name not in ALLOWED_PARAMS[ident]:
                raise InvalidSpecError(f"{ident} does not take --{name}")
            if value < 1:
                raise InvalidSpecError(f"--{name} must be >= 1, got {value}")
        if ident == "thm32" and self.k is not None and self.n is None:
            raise InvalidSpecError("thm32 --k needs --n")
        if ident == "thm41" and self.k is not None and self.n is None:
            raise InvalidSpecError("thm41 --k needs --n")
        if ident == "cor33" and self.n is not None and self.n % 4 != 2:
            raise InvalidSpecError("cor33 holds for n = 2 (mod 4) only")
        return self

    def params(self) -> dict:
        return {"m": self.m, "t": self.t, "n": self.n, "k": self.k}


def normalize_identity(name: str) -> str:
    return name.strip().lower().replace("-", "_")


@dataclass(frozen=True)
class Mismatch:
    q_degree: int
    b_degree: Optional[int]
    lhs: int
    rhs: int

    def to_json(self) -> dict:
        return {"q_degree": self.q_degree, "b_degree": self.b_degree, "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class IdentityReport:
    """Outcome of comparing both sides of one identity.

    ``rows`` lists (q_degree, b_degree, lhs, rhs); b_degree is None for
    univariate identities and for cor33.
    """

    spec: IdentitySpec
    rows: list[tuple[int, Optional[int], int, int]]
    lhs_payload: object
    rhs_payload: object
    first_mismatch: Optional[Mismatch] = None
    elapsed_ms: Optional[float] = field(default=None, compare=False)

    @property
    def equal(self) -> bool:
        return self.first_mismatch is None

    @property
    def lhs_digest(self) -> str:
        return _digest(self.lhs_payload)

    @property
    def rhs_digest(self) -> str:
        return _digest(self.rhs_payload)

    def to_json(self, timing: bool = True) -> dict:
        data = {
            "identity": self.spec.identity,
            "params": self.spec.params(),
            "order": self.spec.order,
            "equal": self.equal,
            "first_mismatch": self.first_mismatch.to_json() if self.first_mismatch else None,
            "lhs_digest": self.lhs_digest,
            "rhs_digest": self.rhs_digest,
            "lhs": self.lhs_payload,
            "rhs": self.rhs_payload,
        }
        data["elapsed_ms"] = round(self.elapsed_ms, 3) if timing and self.elapsed_ms is not None else None
        return data


def _digest(payload) -> str:
    text = json.dumps(payload, separators=(",", ":"), sort_keys=True)
    return "sha256:" + hashlib.sha256(text.encode()).hexdigest()


def _series_rows(lhs, rhs):
    rows = []
    if isinstance(lhs, BivariateSeries):
        for n in range(lhs.order + 1):
            for d in range(n + 1):
                rows.append((n, d, lhs.coefficient(n, d), rhs.coefficient(n, d)))
    else:
        for n in range(lhs.order + 1):
            rows.append((n, None, lhs[n], rhs[n]))
    return rows


def _count_payload(rows, side):
    return {
        "cells": [[q, b] for q, b, _, _ in rows],
        "values": [str(r[side]) for r in rows],
    }


def identity_rows(spec: IdentitySpec):
    """Build both sides of ``spec`` and return (rows, lhs_payload, rhs_payload)."""
    ident, N = spec.identity, spec.order
    series_sides = {
        "uchimura": lambda: (uchimura_lhs(N), divisor_rhs(N)),
        "eq2": lambda: (strict_signed_series(1, N), divisor_rhs(N)),
        "problem6407": lambda: (problem6407_lhs(spec.t, N), finite_divisor_rhs(spec.t, N)),
        "dilcher1": lambda: (dilcher_lhs(spec.m, None, False, N), dilcher_rhs(spec.m, None, False, N)),
        "dilcher2": lambda: (dilcher_lhs(spec.m, spec.t, False, N), dilcher_rhs(spec.m, spec.t, False, N)),
        "b_dilcher1": lambda: (dilcher_lhs(spec.m, None, True, N), dilcher_rhs(spec.m, None, True, N)),
        "b_dilcher2": lambda: (dilcher_lhs(spec.m, spec.t, True, N), dilcher_rhs(spec.m, spec.t, True, N)),
    }
    if ident in series_sides:
        lhs, rhs = series_sides[ident]()
        return _series_rows(lhs, rhs), lhs.to_json(), rhs.to_json()

    rows = []
    if ident == "thm32":
        ns = [spec.n] if spec.n is not None else range(1, N + 1)
        for n in ns:
            ks = [spec.k] if spec.k is not None else range(1, n + 1)
            for k in ks:
                rows.append((n, k, thm32_signed_count(n, k), 1 if n % k == 0 else 0))
    elif ident == "thm41":
        ns = [spec.n] if spec.n is not None else range(1, N + 1)
        for n in ns:
            lhs_t, rhs_t = thm41_lhs_table(n, spec.m), thm41_rhs_table(n, spec.m)
            ks = [spec.k] if spec.k is not None else range(1, n + 1)
            for k in ks:
                rows.append((n, k, lhs_t.get(k, 0), rhs_t.get(k, 0)))
    elif ident == "cor33":
        ns = [spec.n] if spec.n is not None else range(2, N + 1, 4)
        for n in ns:
            odd, even = cor33_counts(n)
            rows.append((n, None, odd, even))
    else:  # pragma: no cover - guarded by validate()
        raise InvalidSpecError(ident)
    return rows, _count_payload(rows, 2), _count_payload(rows, 3)


def verify(spec: IdentitySpec) -> IdentityReport:
    """Build both sides of an identity and compare them cell by cell."""
    spec.validate()
    start = time.perf_counter()
    rows, lhs_payload, rhs_payload = identity_rows(spec)
    mismatch = None
    for q, b, lv, rv in rows:
        if lv != rv:
            mismatch = Mismatch(q, b, lv, rv)
            break
    elapsed = (time.perf_counter() - start) * 1000.0
    return IdentityReport(spec, rows, lhs_payload, rhs_payload, mismatch, elapsed)


def catalog(order: int = 50) -> list[IdentitySpec]:
    """The conservative parameter grid run by ``verify --identity all``."""
    specs = [IdentitySpec("uchimura", order), IdentitySpec("eq2", order)]
    specs += [IdentitySpec("problem6407", order, t=t) for t in range(1, 11)]
    specs.append(IdentitySpec("thm32", order))
    specs.append(IdentitySpec("cor33", order))
    for m in range(1, 4):
        for n in range(1, min(order, 20) + 1):
            specs.append(IdentitySpec("thm41", order, m=m, n=n))
    for m in range(1, 4):
        specs.append(IdentitySpec("dilcher1", order, m=m))
        specs.append(IdentitySpec("b_dilcher1", order, m=m))
        for t in range(1, 11):
            specs.append(IdentitySpec("dilcher2", order, m=m, t=t))
            specs.append(IdentitySpec("b_dilcher2", order, m=m, t=t))
    return sorted(specs, key=_spec_key)


def _spec_key(spec: IdentitySpec):
    return (spec.identity,) + tuple(-1 if v is None else v for v in (spec.m, spec.t, spec.n, spec.k))
