"""Finite prefix-free machines and the codes built on top of them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .algebraic import AlgebraicReal, conversion_factor, ceil_times
from .allocator import CodeBook, RequestStream, allocate_stream
from .lengths import check_bits, count_level, k_length, llex_rank, llex_unrank

INFINITE = math.inf


class MalformedCode(ValueError):
    pass


class TableMachine:
    """A machine given by a finite prefix-free table of codewords."""

    def __init__(self, table: Mapping[str, str]):
        self.table = dict(table)
        codes = sorted(self.table)
        for a, b in zip(codes, codes[1:]):
            # in lexicographic order, a prefix sorts immediately before
            # some extension of it
            if b.startswith(a):
                raise ValueError(f"domain is not prefix-free: {a!r} < {b!r}")
        self._lengths = sorted({len(c) for c in codes})

    @classmethod
    def from_codebook(cls, book: CodeBook) -> "TableMachine":
        return cls(book.entries)

    def domain(self) -> List[str]:
        return list(self.table)

    def outputs(self) -> List[str]:
        return list(dict.fromkeys(self.table.values()))

    def decode(self, data: str) -> Optional[str]:
        """Payload of the codeword that ``data`` starts with, if any."""
        for n in self._lengths:
            if n > len(data):
                break
            hit = self.table.get(data[:n])
            if hit is not None:
                return hit
        return None

    def preimages(self, sigma: str) -> List[str]:
        return [c for c, out in self.table.items() if out == sigma]

    def __len__(self):
        return len(self.table)


def decode(machine: TableMachine, data: str) -> Optional[str]:
    return machine.decode(data)


def k_complexity(machine: TableMachine, k: int, sigma: str) -> Union[int, float]:
    """min k-length of an input producing ``sigma``; ``math.inf`` if none."""
    return min((k_length(k, c) for c in machine.preimages(sigma)), default=INFINITE)


def domain_measure(machine: TableMachine, k: int) -> AlgebraicReal:
    p = AlgebraicReal.p(k)
    total = AlgebraicReal.const(k, 0)
    for c in machine.table:
        total = total + p ** k_length(k, c)
    return total


# ------------------------------------------------------------ rho code

def rho_encode(n: int) -> str:
    """0^(floor(log n)+1) 1 bin(n)."""
    if n < 1:
        raise ValueError("rho code is defined for n >= 1")
    b = format(n, "b")
    return "0" * len(b) + "1" + b


def rho_decode(data: str) -> Tuple[int, int]:
    """Decode a rho codeword at the start of ``data``.

    Returns ``(n, consumed)``.
    """
    z = len(data) - len(data.lstrip("0"))
    if z == 0 or len(data) < 2 * z + 1:
        raise MalformedCode(f"not a rho codeword: {data!r}")
    body = data[z + 1:2 * z + 1]
    if body[0] != "1":
        raise MalformedCode(f"rho payload must start with 1: {data!r}")
    return int(body, 2), 2 * z + 1


def rho_bound(n: int, k: int) -> int:
    return (k + 1) * (n.bit_length() - 1) + 2 * k + 1


# ------------------------------------------------------------------ icm

@dataclass
class Icm:
    k: int
    values: Dict[str, int] = field(default_factory=dict)

    def weight(self) -> AlgebraicReal:
        p = AlgebraicReal.p(self.k)
        total = AlgebraicReal.const(self.k, 0)
        for v in self.values.values():
            total = total + p ** v
        return total

    @classmethod
    def from_json(cls, data: dict) -> "Icm":
        return cls(int(data["k"]), {check_bits(s): int(v) for s, v in data["values"].items()})

    def to_json(self) -> dict:
        return {"k": self.k, "values": dict(self.values)}


def icm_validate(icm: Icm) -> bool:
    return all(v >= 0 for v in icm.values.values()) and icm.weight() <= 1


def icm_compile(icm: Icm) -> TableMachine:
    """Allocate a codeword of k-length F(sigma) + k for every sigma."""
    stream = RequestStream(icm.k, [(v + icm.k, s) for s, v in icm.values.items()])
    return TableMachine.from_codebook(allocate_stream(stream))


# -------------------------------------------------------- two-part code

def capacity_length(j: int, k: int, n: int) -> int:
    """k-length m of the index part for a string of j-length n.

    m = ceil(n * log q_j / log q_k) + 2k, which makes s_k(m) >= s_j(n).
    """
    return ceil_times(n, j, k) + 2 * k


def two_part_constant(j: int, k: int) -> int:
    """C(j, k) in: length <= ratio * l_j + (k+1) floor(log l_j) + C(j, k)."""
    return 4 * k + 1 if j == k else 4 * k + 2


def two_part_length(j: int, k: int, n: int) -> int:
    """k-length of the two-part description of any string of j-length n."""
    return k_length(k, rho_encode(n)) + capacity_length(j, k, n)


def two_part_describe(j: int, k: int, sigma: str) -> str:
    n = k_length(j, sigma)
    if n == 0:
        raise ValueError("the two-part code describes nonempty strings only")
    m = capacity_length(j, k, n)
    r = llex_rank(j, sigma)
    return rho_encode(n) + llex_unrank(k, m, r)


def two_part_decode(j: int, k: int, data: str) -> str:
    n, used = rho_decode(data)
    m = capacity_length(j, k, n)
    residual = m
    end = used
    while residual > 0 and end < len(data):
        residual -= k if data[end] == "1" else 1
        end += 1
    if residual != 0 or end != len(data):
        raise MalformedCode(f"index part does not have k-length {m}")
    r = llex_rank(k, data[used:])
    if r >= count_level(j, n).count:
        raise MalformedCode(f"index {r} outside level {n}")
    return llex_unrank(j, n, r)


# ----------------------------------------------------------- deficiency

def _below_scaled(K: int, j: int, k: int, diff: int) -> bool:
    """Decide K < ratio(j, k) * diff exactly."""
    if diff <= 0:
        return False
    if j == k:
        return K < diff
    precision = 64
    while precision <= 1 << 16:
        r = conversion_factor(j, k, precision)
        if K < r.lo * diff:
            return True
        if K >= r.hi * diff:
            return False
        precision *= 2
    raise ArithmeticError("could not separate K from the scaled length")


def _minimal(strings: Iterable[str]) -> List[str]:
    out: List[str] = []
    for s in sorted(set(strings)):
        if not (out and s.startswith(out[-1])):
            out.append(s)
    return out


@dataclass
class DeficiencyReport:
    j: int
    k: int
    n: int
    members: List[str]
    rows: List[Tuple[str, Union[int, float], int, bool]]
    measure: AlgebraicReal
    domain_measure: AlgebraicReal
    certified: bool

    def csv_rows(self) -> List[Tuple[str, str, int, bool]]:
        return [(s, "inf" if K == INFINITE else str(K), lj, m) for s, K, lj, m in self.rows]


def deficiency_set(machine: TableMachine, k: int, j: int, n: int,
                   max_precision: int = 1 << 12) -> DeficiencyReport:
    """Strings whose K_M^(k) falls below ratio * (l_j - n), with the
    certificate lambda_j(S_n) <= q_j^-n lambda_k(dom M)."""
    rows = []
    members = []
    for sigma in machine.outputs():
        K = k_complexity(machine, k, sigma)
        lj = k_length(j, sigma)
        member = _below_scaled(K, j, k, lj - n)
        rows.append((sigma, K, lj, member))
        if member:
            members.append(sigma)
    pj = AlgebraicReal.p(j)
    measure = AlgebraicReal.const(j, 0)
    for s in _minimal(members):
        measure = measure + pj ** k_length(j, s)
    dom = domain_measure(machine, k)
    scale = pj ** n
    if j == k:
        certified = measure <= scale * dom
    else:
        certified = False
        precision = 64
        while precision <= max_precision:
            left = measure.enclosure(precision)
            s_enc, d_enc = scale.enclosure(precision), dom.enclosure(precision)
            if left.hi <= s_enc.lo * d_enc.lo:
                certified = True
                break
            if left.lo > s_enc.hi * d_enc.hi:
                break
            precision *= 2
    return DeficiencyReport(j, k, n, members, rows, measure, dom, certified)
