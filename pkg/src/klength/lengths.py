"""k-length functions, level sets and the llex order.

Bit strings are plain ``str`` objects over ``'0'``/``'1'``; the empty
string is the empty word.  The k-length charges ``k`` for every occurrence
of the *marked* bit and ``1`` for every other bit.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Iterator, List, Optional

DEFAULT_CAP = 2 ** 20


class LevelTooLarge(Exception):
    """Raised when a level set would exceed the enumeration cap."""

    def __init__(self, count: int, cap: int):
        super().__init__(f"level has {count} strings, cap is {cap}")
        self.count = count
        self.cap = cap


def check_bits(sigma: str) -> str:
    if not isinstance(sigma, str) or sigma.strip("01"):
        raise ValueError(f"not a bit string: {sigma!r}")
    return sigma


@dataclass(frozen=True)
class KLengthSpec:
    k: int
    marked: str = "1"

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k!r}")
        marked = str(self.marked)
        if marked not in ("0", "1"):
            raise ValueError(f"marked bit must be 0 or 1, got {self.marked!r}")
        object.__setattr__(self, "marked", marked)

    def cost(self, bit: str) -> int:
        return self.k if bit == self.marked else 1

    def __call__(self, sigma: str) -> int:
        return k_length(self, sigma)


def as_spec(spec) -> KLengthSpec:
    """Accept either a KLengthSpec or a bare ``k``."""
    if isinstance(spec, KLengthSpec):
        return spec
    return KLengthSpec(spec)


def k_length(spec, sigma: str) -> int:
    spec = as_spec(spec)
    marked = sigma.count(spec.marked)
    return len(sigma) - marked + spec.k * marked


# Counts only depend on k (the marked bit merely relabels strings).
_counts: dict = {}
_counts_lock = threading.Lock()


def _count_table(k: int, n: int) -> List[int]:
    table = _counts.get(k)
    if table is not None and len(table) > n:
        return table
    with _counts_lock:
        table = list(_counts.get(k) or [])
        if not table:
            table = [1] * k + [2]
        while len(table) <= n:
            m = len(table)
            table.append(table[m - 1] + table[m - k])
        _counts[k] = table
        return table


@dataclass(frozen=True)
class LevelCount:
    k: int
    n: int
    count: int

    def __int__(self):
        return self.count


def count_level(spec, n: int) -> LevelCount:
    """Exact number of strings of k-length ``n``."""
    spec = as_spec(spec)
    if n < 0:
        raise ValueError("n must be nonnegative")
    return LevelCount(spec.k, n, _count_table(spec.k, n)[n])


def _count(k: int, n: int) -> int:
    if n < 0:
        return 0
    return _count_table(k, n)[n]


def _iter_level(spec: KLengthSpec, n: int) -> Iterator[str]:
    # first-bit recursion: cheaper bit first, since '0' < '1' lexicographically
    if n == 0:
        yield ""
        return
    for bit in "01":
        c = spec.cost(bit)
        if c <= n:
            for rest in _iter_level(spec, n - c):
                yield bit + rest


def enumerate_level(spec, n: int, cap: int = DEFAULT_CAP) -> List[str]:
    """All strings of k-length ``n`` in llex order.

    Raises
    ------
    LevelTooLarge
        If the level holds more than ``cap`` strings.
    """
    spec = as_spec(spec)
    count = count_level(spec, n).count
    if count > cap:
        raise LevelTooLarge(count, cap)
    if n == 0:
        return [""]
    # iterative build keeps recursion depth flat for long levels
    levels: List[List[str]] = [[""]]
    c0, c1 = spec.cost("0"), spec.cost("1")
    for m in range(1, n + 1):
        row = ["0" + s for s in levels[m - c0]] if m >= c0 else []
        if m >= c1:
            row.extend("1" + s for s in levels[m - c1])
        levels.append(row)
    return levels[n]


def llex_key(spec, sigma: str):
    return (k_length(spec, sigma), sigma)


def llex_compare(spec, sigma: str, tau: str) -> int:
    """-1, 0 or 1 as sigma sorts before, equal to, or after tau."""
    a, b = llex_key(spec, sigma), llex_key(spec, tau)
    return (a > b) - (a < b)


def llex_rank(spec, sigma: str) -> int:
    """Position of ``sigma`` within its own level."""
    spec = as_spec(spec)
    residual = k_length(spec, sigma)
    c0 = spec.cost("0")
    rank = 0
    for bit in sigma:
        if bit == "1":
            rank += _count(spec.k, residual - c0)
        residual -= spec.cost(bit)
    return rank


def llex_unrank(spec, n: int, r: int) -> str:
    spec = as_spec(spec)
    total = count_level(spec, n).count
    if not 0 <= r < total:
        raise IndexError(f"rank {r} out of range for level of size {total}")
    c0, c1 = spec.cost("0"), spec.cost("1")
    out = []
    residual = n
    while residual > 0:
        below = _count(spec.k, residual - c0)
        if r < below:
            out.append("0")
            residual -= c0
        else:
            r -= below
            out.append("1")
            residual -= c1
    return "".join(out)


@dataclass(frozen=True)
class LevelBounds:
    k: int
    n: int
    lower_ok: Optional[bool]
    upper_ok: Optional[bool]
    q_power_ok: bool

    @property
    def ok(self) -> bool:
        return self.q_power_ok and self.lower_ok is not False and self.upper_ok is not False


def level_bounds_check(spec, n: int) -> LevelBounds:
    """Exact check of q^(n-k) <= s(n) <= 2 q^(n-k) and s(n) <= q^n.

    The two-sided bound is only claimed for ``n >= k``; below that the
    corresponding fields are ``None``.
    """
    from .algebraic import AlgebraicReal

    spec = as_spec(spec)
    k = spec.k
    s = count_level(spec, n).count
    q = AlgebraicReal.q(k)
    q_power_ok = AlgebraicReal.const(k, s) <= q ** n
    lower_ok = upper_ok = None
    if n >= k:
        base = q ** (n - k)
        lower_ok = base <= s
        upper_ok = s <= 2 * base
    return LevelBounds(k, n, lower_ok, upper_ok, q_power_ok)
