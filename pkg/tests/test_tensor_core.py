import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rmpkit.tensor_core import (LEVI_CIVITA, WaveVector, apply_rank1, apply_rank2, boost, dot,
                                flatten_index, fourier_diff, fourier_integrate, inverse_map,
                                is_antisymmetric, is_lorentz_map, is_regular, is_symmetric,
                                parse_complex, parse_vector, random_lorentz_map,
                                random_regular_wavevector, rotation, to_column, to_matrix,
                                unflatten_index)

from strategies import regular_wavevectors

GOLDEN = Path(__file__).parent / "golden"


def test_dot_has_no_conjugation():
    n = [1, 2, 2, 5j]
    assert dot(n, n) == pytest.approx(9 - 25)
    assert dot([1j, 0, 0, 0], [1j, 0, 0, 0]) == -1


def test_regularity():
    assert is_regular([1, 2, 3, 4])
    assert not is_regular([1, 0, 0, 0])
    assert not is_regular([1, 1, 1, 0.1])
    # null vector: every component large but n.n = 0
    assert not is_regular([3, 4, 1e-9 + 1, np.sqrt(26) * 1j])
    assert WaveVector((1, 2, 3, 4)).regular
    assert WaveVector((1, 2, 3, 4)).self_dot == 30


def test_fourier_diff_matches_finite_difference():
    # oracle: central difference of f(x) = f0 exp(i n.x) along each axis
    n = np.array([0.7, -1.3, 0.4 + 0.2j, 0.9j])
    f0 = 1.5 - 0.5j
    x = np.array([0.3, -0.2, 0.1, 0.25])
    h = 1e-6
    f = lambda y: f0 * np.exp(1j * (n @ y))
    for a in range(1, 5):
        e = np.zeros(4)
        e[a - 1] = h
        fd = (f(x + e) - f(x - e)) / (2 * h)
        assert fourier_diff(a, n, f0) * np.exp(1j * (n @ x)) == pytest.approx(fd, rel=1e-8)


def test_integration_inverts_differentiation():
    n = [1, 2, 3, 4j]
    for a in range(1, 5):
        assert fourier_diff(a, n, fourier_integrate(a, n, 2.0)) == pytest.approx(2.0)


def test_flat_index_round_trip_and_layout():
    assert flatten_index(1, 1) == 1
    assert flatten_index(1, 2) == 2
    assert flatten_index(2, 1) == 5
    assert flatten_index(4, 4) == 16
    for k in range(1, 17):
        assert flatten_index(*unflatten_index(k)) == k
    H = np.arange(16).reshape(4, 4)
    col = to_column(H)
    for a in range(1, 5):
        for b in range(1, 5):
            assert col[flatten_index(a, b) - 1] == H[a - 1, b - 1]
    assert np.array_equal(to_matrix(col), H)
    with pytest.raises(ValueError):
        flatten_index(0, 1)
    with pytest.raises(ValueError):
        unflatten_index(17)


def test_symmetry_predicates():
    X = np.arange(16.0).reshape(4, 4)
    assert is_symmetric(X + X.T)
    assert is_antisymmetric(X - X.T)
    assert not is_symmetric(X - X.T)


def test_levi_civita():
    assert LEVI_CIVITA[0, 1, 2, 3] == 1
    assert LEVI_CIVITA[1, 0, 2, 3] == -1
    assert LEVI_CIVITA[0, 0, 2, 3] == 0
    assert np.count_nonzero(LEVI_CIVITA) == 24


@pytest.mark.parametrize("axis", [1, 2, 3])
def test_boosts_and_rotations_are_lorentz(axis):
    for x in (-2.0, -0.3, 0.0, 1.1, 2.0):
        assert is_lorentz_map(boost(axis, x))
        assert is_lorentz_map(rotation(axis, x))
        T = boost(axis, x)
        assert np.allclose(inverse_map(T) @ T, np.eye(4))
        assert np.allclose(boost(axis, -x), inverse_map(T))


def test_rotation_is_right_handed():
    assert np.allclose(apply_rank1(rotation(3, np.pi / 2), [1, 0, 0, 0]), [0, 1, 0, 0])
    assert np.allclose(apply_rank1(rotation(1, np.pi / 2), [0, 1, 0, 0]), [0, 0, 1, 0])
    assert np.allclose(apply_rank1(rotation(2, np.pi / 2), [0, 0, 1, 0]), [1, 0, 0, 0])


def test_boost_preserves_dot():
    T = boost(1, 0.7)
    u, v = np.array([1, 2, 3, 4j]), np.array([0.5, -1, 2j, 1])
    assert dot(T @ u, T @ v) == pytest.approx(dot(u, v))
    H = np.outer(u, v)
    assert np.allclose(apply_rank2(T, H), np.outer(T @ u, T @ v))


def test_random_lorentz_map(rng):
    for kind in ("rotation", "boost", "mixed"):
        for _ in range(10):
            assert is_lorentz_map(random_lorentz_map(rng, kind=kind), tol=1e-10)
    with pytest.raises(ValueError):
        random_lorentz_map(rng, kind="shear")


def test_invalid_map_arguments():
    with pytest.raises(ValueError):
        boost(4, 0.1)
    with pytest.raises(ValueError):
        rotation(0, 0.1)
    with pytest.raises(ValueError):
        boost(1, float("inf"))


def test_random_wavevectors_are_regular_and_deterministic():
    a = random_regular_wavevector(7)
    assert a == random_regular_wavevector(7)
    assert a != random_regular_wavevector(8)
    for seed in range(200):
        for physical in (True, False):
            n = random_regular_wavevector(seed, physical=physical)
            assert n.regular
            if physical:
                arr = np.asarray(n)
                assert np.all(arr[:3].imag == 0) and arr[3].real == 0


def test_seed0_wavevector_matches_golden_file():
    golden = json.loads((GOLDEN / "wavevector_seed0.json").read_text())
    n = np.asarray(random_regular_wavevector(0))
    assert np.array_equal(n.real, golden["re"])
    assert np.array_equal(n.imag, golden["im"])


@pytest.mark.parametrize("token,value", [
    ("3", 3), ("-2.5", -2.5), ("5i", 5j), ("-i", -1j), ("i", 1j), ("1+2i", 1 + 2j),
    ("1-2i", 1 - 2j), ("2.5e-1i", 0.25j), (" 4 ", 4), ("3j", 3j),
])
def test_parse_complex(token, value):
    assert parse_complex(token) == value


def test_parse_vector():
    assert np.array_equal(parse_vector("3,4,0,5i", 4), [3, 4, 0, 5j])
    with pytest.raises(ValueError):
        parse_vector("1,2,3", 4)
    with pytest.raises(ValueError):
        parse_vector("1,x,3", 3)
    with pytest.raises(ValueError):
        parse_complex("")


@given(regular_wavevectors(), st.integers(1, 3), st.floats(-2, 2), st.floats(-np.pi, np.pi))
def test_maps_preserve_self_dot(n, axis, chi, theta):
    T = boost(axis, chi) @ rotation(4 - axis, theta)
    assert abs(dot(T @ n, T @ n) - dot(n, n)) <= 1e-11 * np.linalg.norm(T @ n) ** 2 + 1e-12
