import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from klength.algebraic import AlgebraicReal, conversion_factor
from klength.allocator import BudgetExceeded, RequestStream, allocate_stream, verify_codebook
from klength.lengths import count_level, k_length
from klength.machines import (INFINITE, Icm, MalformedCode, TableMachine, capacity_length,
                              decode, deficiency_set, icm_compile, icm_validate, k_complexity,
                              rho_bound, rho_decode, rho_encode, two_part_constant,
                              two_part_decode, two_part_describe, two_part_length)

from conftest import brute_level


def test_decode_examples():
    m = TableMachine({"0": "11"})
    assert decode(m, "0") == "11"
    assert decode(m, "1") is None
    assert decode(m, "0111") == "11"
    book = allocate_stream(RequestStream(1, [(2, "0"), (2, "1")]))
    m = TableMachine.from_codebook(book)
    assert m.table == {"00": "0", "01": "1"}


def test_table_machine_rejects_prefix():
    with pytest.raises(ValueError):
        TableMachine({"0": "", "01": "1"})


def test_k_complexity():
    m = TableMachine({"0": "11", "10": "11"})
    assert k_complexity(m, 2, "11") == 1
    assert k_complexity(m, 2, "0") == INFINITE


@pytest.mark.parametrize("n,code", [(1, "011"), (5, "0001101"), (4, "0001100")])
def test_rho_examples(n, code):
    assert rho_encode(n) == code
    assert rho_decode(code) == (n, len(code))


def test_rho_lengths():
    assert k_length(2, rho_encode(5)) == 10 <= rho_bound(5, 2) == 11
    assert k_length(2, rho_encode(1)) == rho_bound(1, 2) == 5


def test_rho_roundtrip_and_malformed():
    for n in list(range(1, 3000)) + [10 ** 6, 2 ** 40 + 3]:
        code = rho_encode(n)
        assert rho_decode(code + "1011") == (n, len(code))
    for bad in ["", "1", "00", "0010", "0101"]:
        with pytest.raises(MalformedCode):
            rho_decode(bad)
    with pytest.raises(ValueError):
        rho_encode(0)


def test_icm_validate():
    assert icm_validate(Icm(1, {"0": 1, "1": 2}))
    assert not icm_validate(Icm(1, {"0": 0, "1": 0}))
    n = 7
    level = brute_level(2, n)
    assert icm_validate(Icm(2, {s: k_length(2, s) + 2 for s in level}))


def test_icm_compile_examples():
    m = icm_compile(Icm(1, {"0": 1, "1": 2}))
    assert sorted(k_length(1, c) for c in m.table) == [2, 3]
    assert len(icm_compile(Icm(3, {}))) == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.dictionaries(st.text("01", max_size=6), st.integers(0, 12),
                                          max_size=8))
def test_icm_compile_property(k, values):
    icm = Icm(k, values)
    if not icm_validate(icm):
        with pytest.raises(BudgetExceeded):
            icm_compile(icm)
        return
    m = icm_compile(icm)
    for s, v in values.items():
        assert k_complexity(m, k, s) == v + k


def test_two_part_example():
    # rho(4) = 0001100, m = ceil(4 * 0.6942) + 2 = 5, rank of "11" in S_2^4 is 4
    assert capacity_length(2, 1, 4) == 5
    code = two_part_describe(2, 1, "11")
    assert code == "0001100" + "00100"
    assert two_part_decode(2, 1, code) == "11"


def test_two_part_capacity():
    for j in range(1, 5):
        for k in range(1, 5):
            for n in range(1, 40):
                assert count_level(k, capacity_length(j, k, n)).count >= count_level(j, n).count


def test_two_part_roundtrip_fuzz():
    rng = random.Random(11)
    for _ in range(2000):
        j, k = rng.randint(1, 4), rng.randint(1, 4)
        s = "".join(rng.choice("01") for _ in range(rng.randint(1, 40)))
        code = two_part_describe(j, k, s)
        assert k_length(k, code) == two_part_length(j, k, k_length(j, s))
        assert two_part_decode(j, k, code) == s


def test_two_part_prefix_free():
    codes = sorted(two_part_describe(2, 3, s) for n in range(1, 9) for s in brute_level(2, n))
    for a, b in zip(codes, codes[1:]):
        assert not b.startswith(a)


def test_two_part_length_bound():
    for j in range(1, 5):
        for k in range(1, 5):
            ratio = conversion_factor(j, k)
            c = two_part_constant(j, k)
            for n in list(range(1, 200)) + [10 ** 5, 1382006]:
                length = two_part_length(j, k, n)
                gap = length - ratio.lo * n
                assert gap <= (k + 1) * (n.bit_length() - 1) + c
                assert length >= ratio.hi * n


def test_two_part_equal_jk_bound():
    for k in range(1, 5):
        for n in range(1, 300):
            assert two_part_length(k, k, n) <= n + (k + 1) * (n.bit_length() - 1) + 4 * k + 1


def test_two_part_malformed():
    code = two_part_describe(2, 2, "0110")
    for bad in [code + "0", code[:-1], "1" + code]:
        with pytest.raises(MalformedCode):
            two_part_decode(2, 2, bad)


def test_deficiency_example():
    m = TableMachine({"0": "11"})
    report = deficiency_set(m, 1, 1, 0)
    assert report.members == ["11"]
    assert report.measure == Fraction(1, 4)
    assert report.domain_measure == Fraction(1, 2)
    assert report.certified
    assert deficiency_set(m, 1, 1, 50).members == []


def test_deficiency_mixed_fields():
    m = TableMachine({"0": "11", "10": "0110111", "110": ""})
    report = deficiency_set(m, 2, 1, 1)
    assert report.certified
    for sigma, K, lj, member in report.rows:
        expected = K < float(conversion_factor(1, 2)) * (lj - 1)
        assert member == expected


def test_deficiency_fuzz():
    rng = random.Random(3)
    for _ in range(40):
        j, k, n = rng.randint(1, 3), rng.randint(1, 3), rng.randint(0, 8)
        values = {"".join(rng.choice("01") for _ in range(rng.randint(0, 12))): rng.randint(0, 10)
                  for _ in range(rng.randint(1, 6))}
        icm = Icm(k, values)
        if not icm_validate(icm):
            continue
        assert deficiency_set(icm_compile(icm), k, j, n).certified
