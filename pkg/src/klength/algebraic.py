"""Exact arithmetic at the root p_k of x^k + x - 1, plus interval reals.

Elements of Z[p_k] are kept as coefficient tuples of degree < k, reduced
with the identity p^k = 1 - p.  For k = 1 the defining polynomial is
2x - 1, so values collapse to dyadic rationals.  Signs are decided by
interval evaluation on a dyadic enclosure of p_k, with an exact fallback
(gcd with x^k + x - 1, then Sturm root counting on (0, 1)) for the
values that evaluation cannot separate from zero.  The fallback matters
because x^k + x - 1 is reducible for k = 5 (mod 6), e.g.
x^5 + x - 1 = (x^2 - x + 1)(x^3 + x^2 - 1).
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from mpmath import libmp, mp
from mpmath.ctx_iv import MPIntervalContext

DEFAULT_PRECISION = 128
ROOT_TABLE_KS = (1, 2, 3, 4, 5, 10, 20, 30, 50, 100)
_EXACT_CHECK_PRECISION = 256


# ---------------------------------------------------------------- roots

@dataclass(frozen=True)
class RootSpec:
    """Isolating interval ``[lower, upper]`` for p_k with dyadic endpoints."""

    k: int
    lower: Fraction
    upper: Fraction
    precision: int

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def approx(self) -> "RealApprox":
        return RealApprox(self.lower, self.upper)


_roots: Dict[int, Tuple[int, int, int]] = {}
_roots_lock = threading.Lock()


def _f_sign(k: int, a: int, prec: int) -> int:
    # sign of f_k(a / 2^prec), scaled by 2^(prec*k)
    v = a ** k + (a << (prec * (k - 1))) - (1 << (prec * k))
    return (v > 0) - (v < 0)


def solve_root(k: int, precision: int = DEFAULT_PRECISION) -> RootSpec:
    """Bisect f_k on [0, 1] down to width 2^-precision.

    Enclosures are cached per k and only ever refined, so a more precise
    answer always nests inside an earlier one.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if precision < 1:
        raise ValueError("precision must be >= 1")
    if k == 1:
        half = Fraction(1, 2)
        return RootSpec(1, half, half, precision)
    with _roots_lock:
        prec, a, b = _roots.get(k, (0, 0, 1))
        if prec < precision:
            shift = precision - prec
            a <<= shift
            b = a + (1 << shift)
            # invariant: f(a) < 0 < f(b) at the current scale
            for step in range(shift):
                half = (b - a) >> 1
                mid = a + half
                if _f_sign(k, mid, precision) < 0:
                    a = mid
                else:
                    b = mid
            prec = precision
            _roots[k] = (prec, a, b)
    a, b, prec = _coarsen(a, b, prec, precision)
    scale = 1 << prec
    return RootSpec(k, Fraction(a, scale), Fraction(b, scale), prec)


def _coarsen(a: int, b: int, prec: int, precision: int) -> Tuple[int, int, int]:
    # outward rounding to precision+1 keeps width <= 2^-precision and nests
    shift = prec - precision - 1
    if shift <= 0:
        return a, b, prec
    return a >> shift, -((-b) >> shift), precision + 1


def _root_scaled(k: int, precision: int) -> Tuple[int, int, int]:
    root = solve_root(k, precision)
    scale = 1 << root.precision
    return int(root.lower * scale), int(root.upper * scale), root.precision


# ---------------------------------------------------- polynomial helpers

def _trim(c: List) -> List:
    while c and c[-1] == 0:
        c.pop()
    return c


def _reduce(k: int, coeffs: Sequence) -> Tuple:
    if k == 1:
        value = sum((Fraction(c, 2 ** i) for i, c in enumerate(coeffs)), Fraction(0))
        if value == 0:
            return ()
        return (value.numerator if value.denominator == 1 else value,)
    c = list(coeffs)
    for d in range(len(c) - 1, k - 1, -1):
        v = c[d]
        if v:
            c[d - k] += v
            c[d - k + 1] -= v
            c[d] = 0
    return tuple(_trim(c[:k]))


def _poly_mul(a: Sequence, b: Sequence) -> List:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divmod_rem(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    a = list(a)
    lead = b[-1]
    while len(a) >= len(b):
        factor = a[-1] / lead
        shift = len(a) - len(b)
        for i, y in enumerate(b):
            a[shift + i] -= factor * y
        a.pop()
        _trim(a)
    return a


def _poly_gcd(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_divmod_rem(a, b)
    return a


def _poly_eval(c: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for coef in reversed(c):
        acc = acc * x + coef
    return acc


def _sign_changes(values: List[Fraction]) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def sturm_count(poly: Sequence, a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots of ``poly`` in (a, b].

    ``poly`` is given low-degree first.
    """
    p0 = _trim([Fraction(c) for c in poly])
    if len(p0) <= 1:
        return 0
    chain = [p0, _trim([i * c for i, c in enumerate(p0)][1:])]
    while len(chain[-1]) > 1:
        rem = _poly_divmod_rem(chain[-2], chain[-1])
        if not rem:
            break
        chain.append([-c for c in rem])
    return (_sign_changes([_poly_eval(p, a) for p in chain])
            - _sign_changes([_poly_eval(p, b) for p in chain]))


def defining_polynomial(k: int) -> List[int]:
    f = [0] * (k + 1)
    f[0] -= 1
    f[1] += 1
    f[k] += 1
    return f


def _vanishes_at_root(k: int, coeffs: Sequence) -> bool:
    # every root of gcd(g, f_k) is a root of f_k, whose only root in
    # (0, 1) is p_k
    g = _poly_gcd([Fraction(c) for c in coeffs],
                  [Fraction(c) for c in defining_polynomial(k)])
    if len(g) <= 1:
        return False
    return sturm_count(g, Fraction(0), Fraction(1)) > 0


def _bounds_scaled(coeffs: Sequence, a: int, b: int, prec: int) -> Tuple:
    """Bounds on sum c_i x^i for x in [a, b] / 2^prec, times 2^(prec*d)."""
    d = len(coeffs) - 1
    lo = hi = 0
    pa = pb = 1
    for i, c in enumerate(coeffs):
        if c:
            scale = 1 << (prec * (d - i))
            if c > 0:
                lo += c * pa * scale
                hi += c * pb * scale
            else:
                lo += c * pb * scale
                hi += c * pa * scale
        pa *= a
        pb *= b
    return lo, hi, d


# -------------------------------------------------------- AlgebraicReal

class AlgebraicReal:
    """An element of Z[p_k] (Z[1/2] when k = 1), compared exactly."""

    __slots__ = ("k", "coeffs")

    def __init__(self, k: int, coeffs: Sequence = ()):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.k = k
        self.coeffs = _reduce(k, coeffs)

    @classmethod
    def const(cls, k: int, value) -> "AlgebraicReal":
        return cls(k, (value,))

    @classmethod
    def p(cls, k: int) -> "AlgebraicReal":
        return cls(k, (0, 1))

    @classmethod
    def q(cls, k: int) -> "AlgebraicReal":
        # p (p^(k-1) + 1) = 1, so 1/p = p^(k-1) + 1
        c = [0] * k
        c[0] += 1
        c[k - 1] += 1
        return cls(k, c)

    @classmethod
    def p_power(cls, k: int, e: int) -> "AlgebraicReal":
        """p_k ** e, i.e. q_k ** -e; negative ``e`` is allowed."""
        if e >= 0:
            return cls.p(k) ** e
        return cls.q(k) ** (-e)

    def _coerce(self, other) -> "AlgebraicReal":
        if isinstance(other, AlgebraicReal):
            if other.k != self.k:
                raise TypeError(f"mixed fields: k={self.k} and k={other.k}")
            return other
        if isinstance(other, (int, Fraction)):
            return AlgebraicReal.const(self.k, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = list(self.coeffs), other.coeffs
        a.extend([0] * (len(b) - len(a)))
        for i, v in enumerate(b):
            a[i] += v
        return AlgebraicReal(self.k, a)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicReal(self.k, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return AlgebraicReal(self.k, _poly_mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = AlgebraicReal.const(self.k, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def sign(self) -> int:
        c = self.coeffs
        if not c:
            return 0
        if len(c) == 1:
            return (c[0] > 0) - (c[0] < 0)
        prec = 64
        exact_checked = False
        while True:
            a, b, scale = _root_scaled(self.k, prec)
            lo, hi, _ = _bounds_scaled(c, a, b, scale)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            if prec >= _EXACT_CHECK_PRECISION and not exact_checked:
                if _vanishes_at_root(self.k, c):
                    return 0
                exact_checked = True
            prec *= 2

    def is_zero(self) -> bool:
        return self.sign() == 0

    def enclosure(self, precision: int = DEFAULT_PRECISION) -> "RealApprox":
        """Interval enclosure from a root enclosure of width 2^-precision."""
        c = self.coeffs
        if not c:
            return RealApprox(Fraction(0), Fraction(0))
        if len(c) == 1:
            v = Fraction(c[0])
            return RealApprox(v, v)
        a, b, scale = _root_scaled(self.k, precision)
        lo, hi, d = _bounds_scaled(c, a, b, scale)
        denom = 1 << (scale * d)
        return RealApprox(Fraction(lo, denom), Fraction(hi, denom))

    def __float__(self):
        return float(self.enclosure(64).mid)

    def compare(self, other) -> int:
        return (self - other).sign()

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.compare(other) == 0

    __hash__ = None

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*p^{i}")
        return f"AlgebraicReal(k={self.k}, {' + '.join(terms) or '0'})"


def alg_add(a: AlgebraicReal, b) -> AlgebraicReal:
    return a + b


def alg_mul(a: AlgebraicReal, b) -> AlgebraicReal:
    return a * b


def alg_neg(a: AlgebraicReal) -> AlgebraicReal:
    return -a


def alg_pow(a: AlgebraicReal, e: int) -> AlgebraicReal:
    return a ** e


def alg_compare(a: AlgebraicReal, b) -> int:
    return a.compare(b)


def alg_is_zero(a: AlgebraicReal) -> bool:
    return a.is_zero()


def lambda_measure(k: int, sigma: str) -> AlgebraicReal:
    """lambda_k of the cylinder of ``sigma``, namely p_k ** l_k(sigma)."""
    ones = sigma.count("1")
    return AlgebraicReal.p(k) ** (len(sigma) - ones + k * ones)


def bernoulli_product(k: int, sigma: str) -> AlgebraicReal:
    p = AlgebraicReal.p(k)
    ones = sigma.count("1")
    return p ** (len(sigma) - ones) * (1 - p) ** ones


def partial_sum_identity(k: int, n: int) -> bool:
    """sum_{i<=n} p^(k i + 1) + p^((n+1) k) == 1, decided exactly."""
    p = AlgebraicReal.p(k)
    pk = p ** k
    total = AlgebraicReal.const(k, 0)
    term = p
    for _ in range(n + 1):
        total = total + term
        term = term * pk
    return total + pk ** (n + 1) == 1


# ------------------------------------------------------------ RealApprox

def _raw_to_fraction(raw) -> Fraction:
    num, den = libmp.to_rational(raw)
    return Fraction(int(num), int(den))


@dataclass(frozen=True)
class RealApprox:
    lo: Fraction
    hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __float__(self):
        return float(self.mid)

    def contains(self, x) -> bool:
        return self.lo <= Fraction(x) <= self.hi

    def overlaps(self, other: "RealApprox") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def rounded(self, digits: int) -> Optional[str]:
        """Round-half-even decimal rendering, or None if the enclosure
        straddles a rounding boundary."""
        scale = 10 ** digits
        a, b = round(self.lo * scale), round(self.hi * scale)
        if a != b:
            return None
        sign = "-" if a < 0 else ""
        whole, frac = divmod(abs(a), scale)
        if digits == 0:
            return f"{sign}{whole}"
        return f"{sign}{whole}.{frac:0{digits}d}"

    @classmethod
    def _from_iv(cls, value) -> "RealApprox":
        lo, hi = value._mpi_
        return cls(_raw_to_fraction(lo), _raw_to_fraction(hi))


def render(compute: Callable[[int], RealApprox], digits: int,
           precision: int = DEFAULT_PRECISION, max_precision: int = 1 << 14) -> str:
    """Render ``compute(P)`` to ``digits`` decimals, refining P as needed."""
    while True:
        text = compute(precision).rounded(digits)
        if text is not None:
            return text
        if precision >= max_precision:
            # only reachable for values sitting exactly on a rounding tie
            return RealApprox(compute(precision).mid, compute(precision).mid).rounded(digits)
        precision *= 2


def _iv_root(ctx, k: int, precision: int):
    root = solve_root(k, precision)
    return ctx.mpf([_exact_mpf(root.lower), _exact_mpf(root.upper)])


def _exact_mpf(x: Fraction):
    # dyadic only; make_mpf skips the rounding that mpf() would apply
    exp = x.denominator.bit_length() - 1
    return mp.make_mpf(libmp.from_man_exp(x.numerator, -exp))


def _refine(build, precision: int) -> RealApprox:
    target = Fraction(1, 1 << precision)
    guard = 32
    while True:
        ctx = MPIntervalContext()
        ctx.prec = precision + guard
        approx = RealApprox._from_iv(build(ctx, precision + guard))
        if approx.width <= target:
            return approx
        guard *= 2


def entropy(j: int, precision: int = DEFAULT_PRECISION) -> RealApprox:
    """Binary entropy h(p_j) in bits, via -(log p_j)(p_j + j(1 - p_j))."""

    def build(ctx, prec):
        p = _iv_root(ctx, j, prec)
        return -(ctx.log(p) / ctx.log(2)) * (p + j * (1 - p))

    return _refine(build, precision)


def entropy_direct(j: int, precision: int = DEFAULT_PRECISION) -> RealApprox:
    """h(p_j) from the textbook formula; cross-check for ``entropy``."""

    def build(ctx, prec):
        p = _iv_root(ctx, j, prec)
        log2 = ctx.log(2)
        return -(p * ctx.log(p) + (1 - p) * ctx.log(1 - p)) / log2

    return _refine(build, precision)


def conversion_factor(j: int, k: int, precision: int = DEFAULT_PRECISION) -> RealApprox:
    """log q_j / log q_k (equivalently log p_j / log p_k)."""
    if j == k:
        return RealApprox(Fraction(1), Fraction(1))

    def build(ctx, prec):
        return ctx.log(_iv_root(ctx, j, prec)) / ctx.log(_iv_root(ctx, k, prec))

    return _refine(build, precision)


def dimension_target(j: int, k: int, precision: int = DEFAULT_PRECISION) -> RealApprox:
    """-h(p_j) / log2 p_k."""

    def build(ctx, prec):
        pj = _iv_root(ctx, j, prec)
        pk = _iv_root(ctx, k, prec)
        h = -(ctx.log(pj) * pj + ctx.log(1 - pj) * (1 - pj)) / ctx.log(2)
        return -h / (ctx.log(pk) / ctx.log(2))

    return _refine(build, precision)


def ceil_times(n: int, j: int, k: int) -> int:
    """Exact ceil(n * log q_j / log q_k).

    The ratio is 1 when j == k; otherwise the enclosure is refined until
    the ceiling is determined.
    """
    if j == k or n == 0:
        return n
    precision = 64 + n.bit_length()
    while precision <= 1 << 16:
        r = conversion_factor(j, k, precision)
        lo, hi = math.ceil(r.lo * n), math.ceil(r.hi * n)
        if lo == hi:
            return lo
        precision *= 2
    raise ArithmeticError(f"could not determine ceil({n} * ratio({j},{k}))")


# ---------------------------------------------------------------- tables

def root_table(ks: Sequence[int] = ROOT_TABLE_KS, digits: int = 5,
               precision: int = DEFAULT_PRECISION) -> List[Tuple[int, str]]:
    return [(k, render(lambda P, k=k: solve_root(k, P).approx(), digits, precision))
            for k in ks]


def conversion_digits(value: RealApprox) -> int:
    return 4 if value.mid >= 1 else 5


def conversion_table(size: int = 5, precision: int = DEFAULT_PRECISION
                     ) -> List[Tuple[int, int, str]]:
    rows = []
    for j in range(1, size + 1):
        for k in range(1, size + 1):
            digits = conversion_digits(conversion_factor(j, k, 32))
            text = render(lambda P, j=j, k=k: conversion_factor(j, k, P), digits, precision)
            rows.append((j, k, text))
    return rows


def emit_tables(precision: int = DEFAULT_PRECISION):
    """The p_k table and the log p_j / log p_k table for j, k <= 5."""
    return root_table(precision=precision), conversion_table(precision=precision)


# -------------------------------------------------------- classification

class AmbiguousClassification(ValueError):
    def __init__(self, candidates: List[int]):
        super().__init__(f"several k fit within tolerance: {candidates}")
        self.candidates = candidates


def classify_bernoulli(p, tolerance="1e-4", k_max: int = 100) -> Optional[int]:
    """Return the k for which a decimal ``p`` looks like p_k.

    ``p`` and ``tolerance`` are read as exact decimals; the check is
    |p^k - (1 - p)| <= tolerance for k = 1 .. k_max.
    """
    p = Fraction(str(p))
    tol = Fraction(str(tolerance))
    if not 0 < p < 1:
        raise ValueError("p must lie strictly between 0 and 1")
    hits = []
    power = Fraction(1)
    for k in range(1, k_max + 1):
        power *= p
        if abs(power - (1 - p)) <= tol:
            hits.append(k)
    if len(hits) > 1:
        raise AmbiguousClassification(hits)
    return hits[0] if hits else None
