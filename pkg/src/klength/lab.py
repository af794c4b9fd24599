"""Seeded lambda_j sampling and desk-scale checks of the rate identities.

Only the upper-bound side of the complexity rate is observable here: the
two-part description gives a computable upper bound on K^(k), while lower
bounds on true complexity are not computable.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from .algebraic import conversion_factor, dimension_target, solve_root
from .lengths import k_length
from .machines import INFINITE, TableMachine, k_complexity, two_part_constant, two_part_length

LIMITATION = ("upper_bound_rate is the rate of an explicit two-part code; "
              "it bounds K^(k) from above only")


def zero_threshold(j: int) -> int:
    """floor(p_j * 2^64): a 64-bit draw below it yields a 0 bit."""
    precision = 96
    while True:
        root = solve_root(j, precision)
        lo, hi = math.floor(root.lower * 2 ** 64), math.floor(root.upper * 2 ** 64)
        if lo == hi:
            return lo
        precision *= 2


class SampleStream:
    """Deterministic lambda_j bits from a Philox counter-based generator."""

    def __init__(self, j: int, seed: int):
        self.j = j
        self.seed = seed
        self.threshold = np.uint64(zero_threshold(j))
        self._gen = np.random.Philox(seed)

    def take(self, n: int) -> str:
        if n == 0:
            return ""
        raw = self._gen.random_raw(n)
        bits = np.where(raw < self.threshold, ord("0"), ord("1")).astype(np.uint8)
        return bits.tobytes().decode("ascii")


def sample(j: int, seed: int, n: int) -> str:
    return SampleStream(j, seed).take(n)


@dataclass(frozen=True)
class RateReport:
    j: int
    k: int
    seed: int
    n: int
    zeros: int
    j_length: int
    description_length: int
    target_lln: float
    target_rate: float
    target_dim: float

    @property
    def zero_frequency(self) -> Fraction:
        return Fraction(self.zeros, self.n)

    @property
    def length_rate(self) -> Fraction:
        return Fraction(self.j_length, self.n)

    @property
    def upper_bound_rate(self) -> Fraction:
        return Fraction(self.description_length, self.n)

    def overhead_allowance(self) -> float:
        """((k+1) log2(j n) + C(j, k)) / n."""
        return ((self.k + 1) * math.log2(self.j * self.n)
                + two_part_constant(self.j, self.k)) / self.n

    def csv_row(self) -> Tuple:
        return (self.j, self.k, self.seed, self.n, f"{float(self.zero_frequency):.6f}",
                f"{float(self.length_rate):.6f}", f"{float(self.upper_bound_rate):.6f}",
                f"{self.target_lln:.6f}", f"{self.target_rate:.6f}",
                f"{self.target_dim:.6f}")


REPORT_HEADER = ("j", "k", "seed", "n", "zero_frequency", "length_rate",
                 "upper_bound_rate", "target_lln", "target_rate", "target_dim")


def rate_report(j: int, k: int, seed: int, n: int) -> RateReport:
    if n < 1:
        raise ValueError("n must be >= 1")
    x = sample(j, seed, n)
    zeros = x.count("0")
    lj = k_length(j, x)
    pj = float(solve_root(j, 64).approx())
    return RateReport(j, k, seed, n, zeros, lj, two_part_length(j, k, lj),
                      pj, pj + j * (1 - pj), float(dimension_target(j, k)))


def rate_reports(j: int, k: int, seeds: Sequence[int], n: int,
                 workers: int = 1) -> List[RateReport]:
    """Reports for several seeds, in seed order."""
    if workers <= 1:
        return [rate_report(j, k, s, n) for s in seeds]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(lambda s: rate_report(j, k, s, n), seeds))


def incompressibility_report(machine: TableMachine, k: int, j: int,
                             strings: Iterable[str]) -> List[Tuple[str, float]]:
    """(sigma, K_M^(k)(sigma) - ratio * l_j(sigma)); inf outside range(M)."""
    ratio = float(conversion_factor(j, k))
    rows = []
    for sigma in strings:
        K = k_complexity(machine, k, sigma)
        rows.append((sigma, INFINITE if K == INFINITE else K - ratio * k_length(j, sigma)))
    return rows
