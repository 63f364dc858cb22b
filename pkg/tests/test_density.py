import json
import pathlib
from fractions import Fraction

import pytest

from quadtower.density import (
    default_checkpoints,
    density_curve,
    orbit_hits_zero_mod_p,
    primes_up_to,
)
from quadtower.factor import _small_primes
from quadtower.family import SpecializedMap

from conftest import CORPUS, naive_orbit_member

X2P1 = SpecializedMap.make(1, 0, 1)
FIXTURE = pathlib.Path(__file__).parent / "fixtures" / "density_x2p1.json"


def test_primes_up_to_small():
    assert list(primes_up_to(10)) == [2, 3, 5, 7]
    assert list(primes_up_to(2)) == [2]
    assert len(list(primes_up_to(100))) == 25
    with pytest.raises(ValueError):
        list(primes_up_to(1))


def test_primes_up_to_against_independent_sieve():
    # factor's plain sieve is a separate implementation
    assert list(primes_up_to(10 ** 6)) == _small_primes(10 ** 6)
    assert len(_small_primes(10 ** 6)) == 78498


def test_segment_size_does_not_matter():
    a = list(primes_up_to(10 ** 5, segment_size=64))
    b = list(primes_up_to(10 ** 5, segment_size=1 << 16))
    assert a == b


def test_orbit_hits_zero_examples():
    assert orbit_hits_zero_mod_p(X2P1, 0, 2) is True
    assert orbit_hits_zero_mod_p(X2P1, 0, 3) is False
    assert orbit_hits_zero_mod_p(X2P1, 0, 5) is True


def test_orbit_membership_ignores_n_zero():
    # b == 0 mod p alone must not count; only n >= 1 hits do
    m = SpecializedMap.make(0, 0, 3)  # x^2 + 3: orbit of 0 is 3, 12, 147...
    assert orbit_hits_zero_mod_p(m, 0, 5) is False
    assert naive_orbit_member(0, 3, 0, 5) is False


def test_brent_matches_naive_iteration():
    for entry in CORPUS[:5]:
        m = entry.map()
        for p in primes_up_to(10 ** 4):
            assert orbit_hits_zero_mod_p(m, 0, p) == naive_orbit_member(
                m.gamma_a, m.c_a, 0, p
            ), (entry.name, p)


def test_density_curve_x2p1_oracle():
    curve = density_curve(X2P1, 0, 100)
    expected_members = [
        p for p in primes_up_to(100) if naive_orbit_member(0, 1, 0, p)
    ]
    assert list(curve.member_primes) == expected_members
    last = curve.rows[-1]
    assert last.proportion == Fraction(len(expected_members), 25)


def test_density_power_map():
    m = SpecializedMap.make(0, 0, 0)  # x^2; orbit of 2 is 2^(2^n)
    curve = density_curve(m, 2, 1000)
    assert list(curve.member_primes) == [2]
    assert curve.rows[-1].proportion == Fraction(1, 168)


def test_density_fermat_map_contains_641():
    m = SpecializedMap.make(0, 1, 1)  # (x - 1)^2 + 1, orbit of 3 = Fermat numbers
    curve = density_curve(m, 3, 10 ** 4)
    assert 641 in curve.member_primes  # 641 | F_5
    # every member divides some Fermat number 2^(2^n) + 1
    for p in curve.member_primes:
        hits = False
        power = 2
        for _ in range(5 * p.bit_length()):
            power = power * power % p
            if (power + 1) % p == 0:
                hits = True
                break
        assert hits, p


def test_density_rows_monotone():
    curve = density_curve(X2P1, 0, 10 ** 4)
    for a, b in zip(curve.rows, curve.rows[1:]):
        assert a.x < b.x
        assert a.primes_tested <= b.primes_tested
        assert a.members <= b.members


def test_density_shard_determinism():
    curves = [
        density_curve(X2P1, 0, 10 ** 4, shards=k, workers=w)
        for k, w in ((1, 1), (4, 1), (16, 2), (5, 1))
    ]
    csvs = {c.to_csv() for c in curves}
    assert len(csvs) == 1
    assert curves[0].member_primes == curves[1].member_primes


def test_density_checkpoint_validation():
    with pytest.raises(ValueError):
        density_curve(X2P1, 0, 100, checkpoints=[50, 50])
    with pytest.raises(ValueError):
        density_curve(X2P1, 0, 100, checkpoints=[200])
    with pytest.raises(ValueError):
        density_curve(X2P1, 0, 1)
    with pytest.raises(ValueError):
        density_curve(X2P1, 0, 100, shards=0)


def test_default_checkpoints():
    assert default_checkpoints(10 ** 5) == [10, 100, 1000, 10 ** 4, 10 ** 5]
    assert default_checkpoints(500) == [10, 100, 500]
    assert default_checkpoints(10) == [10]


def test_density_fixture_x1000_exact():
    data = json.loads(FIXTURE.read_text())
    curve = density_curve(X2P1, 0, 1000)
    recorded = {row["X"]: row for row in data["rows"]}
    last = curve.rows[-1]
    assert last.members == recorded[1000]["members"] == 17
    assert last.primes_tested == recorded[1000]["primes_tested"] == 168


def test_density_decay_from_fixture():
    data = json.loads(FIXTURE.read_text())
    rows = {row["X"]: Fraction(row["proportion_num"], row["proportion_den"]) for row in data["rows"]}
    assert rows[10 ** 6] < rows[10 ** 3]


@pytest.mark.slow
def test_density_x1e6_regression_matches_fixture():
    data = json.loads(FIXTURE.read_text())
    curve = density_curve(X2P1, 0, 10 ** 6, shards=8, workers=2)
    for row, recorded in zip(curve.rows, data["rows"]):
        assert row.x == recorded["X"]
        assert row.primes_tested == recorded["primes_tested"]
        assert row.members == recorded["members"]
        assert row.proportion == Fraction(
            recorded["proportion_num"], recorded["proportion_den"]
        )
