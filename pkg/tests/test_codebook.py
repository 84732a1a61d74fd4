from fractions import Fraction
from math import comb

import numpy as np
import pytest

from compmod.codebook import (
    build_cm,
    build_ofdm,
    build_ofdm_im,
    build_wcm,
    energy_fraction,
    gray,
    gray_inverse,
    modulation_name,
    psk,
    spectral_efficiency,
    table_rows,
)
from compmod.combinatorics import rank_weak, unrank_weak
from compmod.schemes import ALL_SCHEMES


@pytest.mark.parametrize("M", [2, 4, 8, 16, 32, 64])
def test_psk_unit_energy_and_gray_adjacency(M):
    c = psk(M)
    assert np.allclose(np.abs(c.points) ** 2, 1.0, atol=1e-12)
    assert np.mean(np.abs(c.points) ** 2) == pytest.approx(1.0)
    for k in range(M):
        nxt = (k + 1) % M
        if M > 2 or k == 0:
            assert bin(int(c.labels[k]) ^ int(c.labels[nxt])).count("1") == 1


def test_psk_small_orders():
    b = psk(2)
    assert np.allclose(b.points, [1, -1]) and list(b.labels) == [0, 1]
    q = psk(4)
    assert np.allclose(q.points, [1, 1j, -1, -1j])
    assert np.allclose(q.modulate([0, 1, 3, 2]), [1, 1j, -1, -1j])
    with pytest.raises(ValueError):
        psk(6)
    with pytest.raises(ValueError):
        psk(1)


def test_gray_inverse_roundtrip():
    k = np.arange(1 << 12)
    assert np.array_equal(gray_inverse(gray(k)), k)


def test_wcm_table_examples():
    cb = build_wcm(3, 3, 1, E_T=3.0)
    assert (cb.f1, cb.f2, cb.f, cb.L) == (3, 3, 6, 64)
    r = rank_weak((0, 1, 2))
    rows = np.flatnonzero(cb.pattern_rank == r)
    assert np.allclose(cb.energies[rows[0]], [0, 1, 2])
    assert list(cb.orders[rows[0]]) == [0, 2, 4]
    first = cb.codeword(0)
    assert np.allclose(first.energies, [0, 0, 3]) and first.label == "000000"
    assert list(cb.orders[0]) == [0, 0, 8]
    # only the 8-PSK point with label 000 survives at rank 0, symbol bits 0
    assert first.symbols[2] == pytest.approx(np.sqrt(3.0))


def test_wcm_4_4_1_size():
    cb = build_wcm(4, 4, 1)
    assert (cb.f1, cb.f2, cb.L) == (5, 4, 512)
    assert spectral_efficiency(cb) == Fraction(9, 4)


def test_wcm_symbol_bits_follow_subcarrier_order():
    cb = build_wcm(3, 3, 1, E_T=3.0)
    base = rank_weak((0, 1, 2)) << 3
    # subcarrier 1 (BPSK) takes the first symbol bit, subcarrier 2 (QPSK) the other two
    assert cb.symbols[base + 0b000][1] == pytest.approx(1.0)
    assert cb.symbols[base + 0b100][1] == pytest.approx(-1.0)
    q = psk(4).modulate([0, 1, 2, 3]) * np.sqrt(2.0)
    for v in range(4):
        assert cb.symbols[base + v][2] == pytest.approx(q[v])


def test_cm_sizes():
    cb = build_cm(7, 4, 2)
    assert (cb.f1, cb.f2) == (4, 4) and spectral_efficiency(cb) == 2
    cb = build_cm(12, 4, 2)
    assert cb.f1 == 7 and cb.f == 11 and spectral_efficiency(cb) == Fraction(11, 4)
    cb = build_cm(6, 4, 4)
    assert spectral_efficiency(cb) == Fraction(11, 4)
    with pytest.raises(ValueError, match="I must be >= N"):
        build_cm(3, 4, 2)


def test_cm_degenerates_to_ofdm():
    for N, M in [(4, 4), (3, 2), (2, 8)]:
        a, b = build_cm(N, N, M), build_ofdm(N, M)
        assert a.L == b.L
        assert np.array_equal(a.symbols, b.symbols)
        assert np.allclose(a.energies, a.E_T / N)


def test_ofdm_im_sizes():
    assert build_ofdm_im(4, 3, 8).f == 11
    cb = build_ofdm_im(4, 3, 4)
    assert cb.f == 8 and spectral_efficiency(cb) == 2
    assert np.array_equal(build_ofdm_im(4, 4, 4).symbols, build_ofdm(4, 4).symbols)


def test_ofdm_basics():
    cb = build_ofdm(4, 4)
    assert spectral_efficiency(cb) == 2
    assert np.allclose(cb.energies.sum(axis=1), cb.E_T)


def test_footnote_bit_counts():
    assert build_wcm(6, 4, 1).f == 12
    assert spectral_efficiency(build_cm(6, 4, 4)) == Fraction(11, 4)


@pytest.mark.parametrize("spec", ALL_SCHEMES, ids=lambda s: s.tag)
def test_energy_conservation_and_levels(spec):
    cb = spec.build()
    e = np.abs(cb.symbols) ** 2
    assert np.allclose(e.sum(axis=1), cb.E_T, rtol=1e-9)
    k = e * cb.quanta / cb.E_T
    assert np.allclose(k, np.round(k), atol=1e-9)
    assert np.array_equal(np.round(k).astype(int), cb.levels)
    assert cb.L == 1 << cb.f


@pytest.mark.parametrize("builder,args", [
    (build_wcm, (3, 3, 1)), (build_wcm, (4, 4, 1)), (build_cm, (7, 4, 2)), (build_cm, (6, 4, 4)),
])
def test_energy_sets_hamming_distance_at_least_two(builder, args):
    cb = builder(*args)
    pats = np.unique(cb.levels, axis=0)
    diff = (pats[:, None, :] != pats[None, :, :]).sum(axis=2)
    off = diff[~np.eye(len(pats), dtype=bool)]
    assert off.min() == 2


def test_labels_are_unique_codewords():
    for spec in ALL_SCHEMES[:4]:
        cb = spec.build()
        assert len(np.unique(np.round(cb.symbols, 9), axis=0)) == cb.L


def test_table_rows_match_lookup_table():
    rows = table_rows(build_wcm(3, 3, 1))
    assert [r["bits"] for r in rows] == ["000", "001", "010", "011", "100", "101", "110", "111",
                                        "unused", "unused"]
    assert rows[1]["energies"] == ["0", "E_T/3", "2E_T/3"]
    assert rows[5]["modulations"] == ["BPSK", "BPSK", "BPSK"]
    assert rows[9]["modulations"] == ["8-PSK", "0", "0"]


def test_energy_fraction_and_names():
    assert energy_fraction(0, 3) == "0"
    assert energy_fraction(3, 3) == "E_T"
    assert energy_fraction(2, 4) == "E_T/2"
    assert modulation_name(8) == "8-PSK" and modulation_name(0) == "0"


def test_bit_limit():
    with pytest.raises(ValueError):
        build_wcm(20, 4, 1)


def test_codebook_is_read_only():
    cb = build_cm(7, 4, 2)
    with pytest.raises(ValueError):
        cb.symbols[0, 0] = 0
