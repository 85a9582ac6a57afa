from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vilenkin.weights import (
    NEITHER,
    NON_DECREASING,
    NON_INCREASING,
    InvalidWeightsError,
    NorlundWeights,
    build_weights,
    check_cond,
    check_regular,
    classify,
    cond_ratio,
    moricz_siddiqi_quantity,
    regularity_ratio,
)


def test_constant():
    w = build_weights("constant", 50)
    assert np.all(w.q == 1)
    assert np.array_equal(w.Q, np.arange(51))
    assert w.monotone_class == NON_DECREASING
    assert w.is_fejer


def test_power_one():
    w = build_weights("power:1", 40)
    n = np.arange(41)
    assert np.array_equal(w.q, np.arange(1, 41))
    assert np.array_equal(w.Q, n * (n + 1) / 2)
    assert w.monotone_class == NON_DECREASING


def test_geometric_half():
    w = build_weights("geom:0.5", 30)
    n = np.arange(31)
    assert np.max(np.abs(w.Q - 2 * (1 - 2.0**-n))) < 1e-14
    assert w.monotone_class == NON_INCREASING


def test_log_and_negative_power_classes():
    assert build_weights("log", 20).monotone_class == NON_DECREASING
    assert build_weights("power:-1", 20).monotone_class == NON_INCREASING
    assert classify(np.array([1.0, 2.0, 1.0])) == NEITHER


@pytest.mark.parametrize("spec", ["geom:1.5", "geom:0", "power:x", "bogus", "constant:3", "log:2"])
def test_invalid_specs(spec):
    with pytest.raises(InvalidWeightsError):
        build_weights(spec, 10)


def test_invalid_sequences():
    with pytest.raises(InvalidWeightsError):
        NorlundWeights(np.array([0.0, 1.0]))
    with pytest.raises(InvalidWeightsError):
        NorlundWeights(np.array([1.0, -1.0]))
    with pytest.raises(InvalidWeightsError):
        NorlundWeights(np.array([]))
    with pytest.raises(InvalidWeightsError):
        build_weights([1.0, 2.0], 5)


def test_file_weights(tmp_path):
    p = tmp_path / "w.txt"
    p.write_text("\n".join(str(1 + 1 / (k + 1)) for k in range(30)))
    w = build_weights(f"file:{p}", 20)
    assert len(w) == 20 and w.monotone_class == NON_INCREASING
    with pytest.raises(InvalidWeightsError):
        build_weights(f"file:{p}", 40)


def test_regularity_examples():
    c = build_weights("constant", 64)
    for n in (1, 5, 64):
        assert regularity_ratio(c, n) == pytest.approx(1 / n)
    p = build_weights("power:1", 64)
    for n in (1, 5, 64):
        assert regularity_ratio(p, n) == pytest.approx(2 / (n + 1))
    g = build_weights("geom:0.5", 64)
    assert regularity_ratio(g, 20) < 1e-5
    assert check_regular(c).holds and check_regular(p).holds
    assert check_regular(g).holds
    assert not check_regular(build_weights([2.0**k for k in range(64)], 64)).holds


def test_cond_examples():
    c = build_weights("constant", 1024)
    assert all(cond_ratio(c, n) == 1 for n in (1, 7, 1024))
    assert check_cond(c).holds
    harmonic = build_weights("power:-1", 4096)
    assert not check_cond(harmonic).holds
    assert not check_cond(build_weights("geom:0.5", 1024)).holds
    assert check_cond(build_weights([1 + 1 / (k + 1) for k in range(1024)], 1024)).holds


def _ms_exact(q, n, gamma):
    Q = sum(q[:n])
    return Fraction(n) ** (gamma - 1) / Q**gamma * sum(x**gamma for x in q[:n])


def test_moricz_siddiqi_examples():
    c = build_weights("constant", 200)
    for g in (1.5, 2.0):
        assert moricz_siddiqi_quantity(c, 50, g) == pytest.approx(1.0)
    p = build_weights("power:1", 200)
    want = _ms_exact([Fraction(k + 1) for k in range(100)], 100, 2)
    assert want == Fraction(13534, 10201)
    assert moricz_siddiqi_quantity(p, 100, 2) == pytest.approx(float(want), rel=1e-14)
    geo = build_weights("geom:0.5", 64)
    want = _ms_exact([Fraction(1, 2**k) for k in range(20)], 20, 2)
    assert moricz_siddiqi_quantity(geo, 20, 2) == pytest.approx(float(want), rel=1e-12)
    vals = [moricz_siddiqi_quantity(geo, n, 2) for n in (10, 20, 40)]
    assert vals[2] / vals[0] == pytest.approx(4, rel=1e-2)
    with pytest.raises(ValueError):
        moricz_siddiqi_quantity(c, 10, 1.0)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0.01, 100), min_size=2, max_size=60))
def test_partial_sums_property(q):
    w = NorlundWeights(np.array(q))
    assert w.Q[0] == 0
    assert np.allclose(np.diff(w.Q), q)
    assert w.partial_sum(len(q)) == pytest.approx(sum(q))
    if w.monotone_class == NON_DECREASING:
        assert np.all(np.diff(q) >= 0)
