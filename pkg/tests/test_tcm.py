import math

import pytest

from cmtorsion.arith import divisors, primes_in
from cmtorsion.divisibility import lambda_set
from cmtorsion.errors import DomainError
from cmtorsion.olson import generators, is_olson
from cmtorsion.tcm import (TcmCertificate, TcmWitness, avg_experiment, known_tcm,
                           lower_bound_sieve, tcm_lower_bound)


@pytest.fixture(scope="module")
def lb_1e4():
    return lower_bound_sieve(10**4)


def test_known_values():
    assert known_tcm(1).value == 6
    assert known_tcm(2).value == 12
    assert known_tcm(8).value == known_tcm(10).value == 50
    assert known_tcm(12).value == 84
    assert known_tcm(101).value == 6
    assert known_tcm(4) is None and known_tcm(9) is None
    assert all(known_tcm(d).source for d in (1, 2, 8, 10, 12, 7))


def test_lower_bound_examples():
    assert tcm_lower_bound(1).lower_bound == 6
    c = tcm_lower_bound(3)
    assert c.lower_bound == 7
    assert [(w.source, w.base) for w in c.achieving] == [("ramified-l", 7)]
    c = tcm_lower_bound(4)
    assert c.lower_bound == 13 and c.achieving[0].source == "split-j0"
    assert tcm_lower_bound(2).lower_bound == 12
    with pytest.raises(DomainError):
        tcm_lower_bound(0)


def test_certificate_invariants():
    with pytest.raises(DomainError):
        TcmCertificate(1, 5, (TcmWitness("olson-floor", 1, 5, ""),))
    with pytest.raises(DomainError):
        TcmCertificate(1, 7, (TcmWitness("olson-floor", 1, 6, ""),))


def test_sound_against_registry():
    for d in [1, 2, 8, 10, 12] + primes_in(7, 10**4).tolist():
        assert tcm_lower_bound(d).lower_bound <= known_tcm(d).value


def test_sieve_matches_certificates(lb_1e4):
    for d in range(1, 3001):
        assert lb_1e4[d] == tcm_lower_bound(d).lower_bound
    for d in range(3001, 10**4 + 1, 37):
        assert lb_1e4[d] == tcm_lower_bound(d).lower_bound


def test_divisor_monotone(lb_1e4):
    for d in range(1, 10**4 + 1):
        for e in divisors(d):
            assert lb_1e4[e] <= lb_1e4[d]


def test_olson_degrees_only_carry_the_floor():
    for d in range(1, 4001, 2):
        if is_olson(d).olson:
            c = tcm_lower_bound(d)
            assert c.lower_bound == 6
            assert [w.source for w in c.witnesses] == ["olson-floor"]


def test_point_order_witnesses_pass_lambda_filter():
    for d in range(1, 3001):
        for ell in tcm_lower_bound(d).point_orders:
            assert any(12 * d % lam == 0 for lam in lambda_set(ell).elements)


def test_avg_experiment_floor_and_shape():
    s = avg_experiment(1000)
    assert s.total >= 6 * 1000
    assert s.checkpoints == (125, 250, 500, 1000)
    assert math.isfinite(s.slope)
    with pytest.raises(DomainError):
        avg_experiment(15)


def test_avg_experiment_odd_only_dominates_ramified_sum():
    x = 10**5
    s = avg_experiment(x, odd_only=True)
    ells = sum(e.witness_prime for e in generators(x, primitive=False, bounded=True).entries
               if e.witness_prime)
    assert s.total >= ells
    lb = lower_bound_sieve(x)
    assert s.total == int(lb[1::2].sum())


def test_avg_experiment_checkpoint_means():
    s = avg_experiment(4000)
    lb = lower_bound_sieve(4000)
    for c, m in zip(s.checkpoints, s.means):
        assert m == pytest.approx(lb[1:c + 1].mean(), rel=1e-12)


def test_avg_experiment_reports_slope_at_1e6():
    s = avg_experiment(10**6)
    assert math.isfinite(s.slope) and s.total >= 6 * 10**6
