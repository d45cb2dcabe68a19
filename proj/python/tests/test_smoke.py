import math
import random

import pytest

import permsteg


def test_histogram_and_capacity():
    h = permsteg.compute_histogram([1, 2, 3, 4, 4, 4, 4])
    assert h.values == [1, 2, 3, 4]
    assert h.counts == [1, 1, 1, 4]
    assert h.q == 4
    assert permsteg.capacity([1, 2, 3, 4, 4, 4, 4]) == 7
    assert permsteg.log2_multinomial([1, 1, 1, 4]) == pytest.approx(math.log2(210))


def test_plain_round_trip_preserves_histogram():
    rng = random.Random(3)
    x = [rng.randrange(256) for _ in range(2000)]
    c = permsteg.capacity(x)
    m = [rng.randrange(2) for _ in range(c)]
    y = permsteg.perm_encode(x, m)
    assert sorted(y) == sorted(x)
    assert permsteg.perm_decode(y) == m


def test_keyed_round_trip():
    rng = random.Random(5)
    x = [rng.randrange(16) for _ in range(500)]
    m = [rng.randrange(2) for _ in range(100)]
    y = permsteg.perm_encode(x, m, passphrase="secret", key_stages=2)
    decoded = permsteg.perm_decode(y, passphrase="secret", key_stages=2)
    assert decoded[:100] == m
    assert not any(decoded[100:])


def test_embed_extract_under_constraint():
    x = permsteg.gaussian_host(20000, 7)
    kappa = permsteg.parse_kappa("20db")
    msg = permsteg.bytes_to_bits(b"hello, world")
    r = permsteg.embed(x, msg, kappa, passphrase="k")
    assert sorted(r["stego"]) == sorted(x)
    assert r["selection"]["report"]["xi_bar"] >= kappa
    out = permsteg.extract(r["stego"], kappa, passphrase="k")
    assert len(out) == r["capacity"]
    assert permsteg.bits_to_bytes(out[: len(msg)]) == b"hello, world"


def test_errors():
    with pytest.raises(permsteg.CapacityError):
        permsteg.perm_encode([0, 0, 1], [1, 1])
    with pytest.raises(permsteg.InfeasibleError):
        permsteg.select_partitioning([0, 1, 2, 3, 3, 2, 1, 0, 4], 1e9, sequence="lsb")
    with pytest.raises(permsteg.Error):
        permsteg.compute_histogram([])


def test_analyze_six_element_host():
    rep = permsteg.analyze([0, 0, 1, 5, 5, 6], groups=[[0, 1], [2, 3]])
    assert rep["capacity"] == 2
    assert rep["p"] == 2
    assert permsteg.uniform_support_sequence([0, 1, 100], 3) == [[0], [1], [2]]


def test_experiment_csv():
    csv = permsteg.run_experiment("fig2", n=2000, grid=[0.5], threads=1)
    lines = csv.strip().splitlines()
    assert len(lines) == 2
    assert csv == permsteg.run_experiment("fig2", n=2000, grid=[0.5], threads=2)
