"""Online k-KC allocation of prefix-free codewords with exact k-lengths.

Requests ``(r, payload)`` are admitted while the exact sum of p_k^r stays
within p_k^k; every admitted request gets the llex-least free codeword of
k-length ``r``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .algebraic import AlgebraicReal
from .lengths import check_bits, count_level, enumerate_level, k_length


class BudgetExceeded(Exception):
    """A request would push the spent measure past p_k^k.

    ``index`` is the position of the offending request in its stream
    (``None`` for a standalone ``try_request``) and ``book`` the codebook
    as it stood before the request.
    """

    def __init__(self, klen: int, index: Optional[int] = None, book=None):
        where = "" if index is None else f" at index {index}"
        super().__init__(f"request of k-length {klen} exceeds the budget{where}")
        self.klen = klen
        self.index = index
        self.book = book


class InstanceTooLarge(Exception):
    pass


def _is_prefix_pair(a: str, b: str) -> bool:
    return a.startswith(b) or b.startswith(a)


class CodeBook:
    """Prefix-free codewords with payloads, plus the exact measure spent."""

    def __init__(self, k: int):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.k = k
        self.entries: Dict[str, str] = {}
        self.requested: Dict[str, int] = {}
        self.spent = AlgebraicReal.const(k, 0)
        self._trie: dict = {}

    @property
    def budget(self) -> AlgebraicReal:
        return AlgebraicReal.p(self.k) ** self.k

    @property
    def remaining(self) -> AlgebraicReal:
        return self.budget - self.spent

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries.items())

    def _insert(self, code: str, payload: str, klen: Optional[int] = None):
        node = self._trie
        for bit in code:
            node = node.setdefault(bit, {})
        node["$"] = True
        self.entries[code] = payload
        if klen is not None:
            self.requested[code] = klen
        self.spent = self.spent + AlgebraicReal.p(self.k) ** k_length(self.k, code)

    def find_free(self, r: int) -> Optional[str]:
        """llex-least string of k-length ``r`` incomparable to every codeword."""
        k = self.k

        def search(node, residual):
            if node is None:
                return "0" * residual
            if "$" in node:
                return None
            if residual == 0:
                # node has allocated descendants
                return None
            found = search(node.get("0"), residual - 1)
            if found is not None:
                return "0" + found
            if residual >= k:
                found = search(node.get("1"), residual - k)
                if found is not None:
                    return "1" + found
            return None

        return search(self._trie, r)

    def try_request(self, r: int, payload: str = "") -> str:
        """Admit one request or raise ``BudgetExceeded`` leaving the book as is."""
        if r < 0:
            raise ValueError("k-length must be nonnegative")
        cost = AlgebraicReal.p(self.k) ** r
        if self.spent + cost > self.budget:
            raise BudgetExceeded(r, book=self)
        code = self.find_free(r)
        if code is None:
            # cannot happen when the budget check passed
            raise AssertionError(f"no free codeword of k-length {r}")
        self._insert(code, payload, r)
        return code

    @classmethod
    def from_entries(cls, k: int, entries: Iterable[Tuple[str, str]]) -> "CodeBook":
        """Build a book from explicit codewords without any checks."""
        book = cls(k)
        for code, payload in entries:
            book._insert(check_bits(code), payload)
        return book

    def to_json(self) -> dict:
        return {"k": self.k,
                "entries": [{"code": c, "output": o} for c, o in self.entries.items()]}

    @classmethod
    def from_json(cls, data: dict) -> "CodeBook":
        return cls.from_entries(int(data["k"]),
                                ((e["code"], e["output"]) for e in data["entries"]))

    def __repr__(self):
        return f"CodeBook(k={self.k}, entries={self.entries!r})"


def allocator_new(k: int) -> CodeBook:
    return CodeBook(k)


def try_request(book: CodeBook, r: int, payload: str = "") -> str:
    return book.try_request(r, payload)


@dataclass
class RequestStream:
    k: int
    items: List[Tuple[int, str]] = field(default_factory=list)

    @classmethod
    def from_jsonl(cls, k: int, lines: Iterable[str]) -> "RequestStream":
        items = []
        for line in lines:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            items.append((int(obj["klen"]), check_bits(str(obj.get("payload", "")))))
        return cls(k, items)

    def to_jsonl(self) -> str:
        return "".join(json.dumps({"klen": r, "payload": t}) + "\n" for r, t in self.items)


def allocate_stream(stream: RequestStream) -> CodeBook:
    """Process a whole stream; raises ``BudgetExceeded`` with the index."""
    book = CodeBook(stream.k)
    for i, (r, payload) in enumerate(stream.items):
        try:
            book.try_request(r, payload)
        except BudgetExceeded as exc:
            raise BudgetExceeded(r, index=i, book=book) from exc
    return book


@dataclass
class VerifyReport:
    prefix_violations: List[Tuple[str, str]]
    length_violations: List[Tuple[str, int, int]]
    spent_matches: bool
    within_budget: bool

    @property
    def ok(self) -> bool:
        return (not self.prefix_violations and not self.length_violations
                and self.spent_matches and self.within_budget)


def verify_codebook(book: CodeBook) -> VerifyReport:
    codes = sorted(book.entries)
    # in sorted order any prefix relation shows up between some code and a
    # later one starting with it; a pairwise scan keeps this obviously right
    prefix = [(a, b) for a, b in itertools.combinations(codes, 2) if _is_prefix_pair(a, b)]
    lengths = [(c, r, k_length(book.k, c)) for c, r in book.requested.items()
               if k_length(book.k, c) != r]
    p = AlgebraicReal.p(book.k)
    fresh = AlgebraicReal.const(book.k, 0)
    for c in codes:
        fresh = fresh + p ** k_length(book.k, c)
    return VerifyReport(prefix, lengths, fresh == book.spent, fresh <= book.budget)


def feasibility_oracle(k: int, lengths: Sequence[int], max_std_length: Optional[int] = None,
                       max_candidates: int = 5000) -> bool:
    """Exhaustive search for a prefix-free set with exactly these k-lengths.

    Only strings of standard length <= ``max_std_length`` are considered
    (default: no restriction beyond the k-lengths themselves).
    """
    lengths = sorted(lengths)
    if not lengths:
        return True
    total = sum(count_level(k, r).count for r in set(lengths))
    if total > max_candidates or len(lengths) > 16:
        raise InstanceTooLarge(f"{total} candidate strings for {len(lengths)} requests")
    levels = {}
    for r in set(lengths):
        cand = enumerate_level(k, r)
        if max_std_length is not None:
            cand = [s for s in cand if len(s) <= max_std_length]
        levels[r] = cand

    chosen: List[str] = []

    def place(i: int, start: int) -> bool:
        if i == len(lengths):
            return True
        cand = levels[lengths[i]]
        for idx in range(start, len(cand)):
            s = cand[idx]
            if any(_is_prefix_pair(s, c) for c in chosen):
                continue
            chosen.append(s)
            nxt = idx + 1 if i + 1 < len(lengths) and lengths[i + 1] == lengths[i] else 0
            if place(i + 1, nxt):
                return True
            chosen.pop()
        return False

    return place(0, 0)
