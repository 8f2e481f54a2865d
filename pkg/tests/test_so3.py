"""Generators, Rodrigues exponentials and the commutator."""

import math

import numpy as np
import pytest

from qoct import (
    DomainError,
    Rotation,
    SkewGenerator,
    StateS2,
    bracket,
    generator,
    rodrigues_exp,
)


def exp_taylor(m: np.ndarray, t: float, terms: int = 40) -> np.ndarray:
    """Independent oracle: truncated matrix exponential series."""
    acc = np.eye(3)
    term = np.eye(3)
    for n in range(1, terms + 1):
        term = term @ (t * m) / n
        acc = acc + term
    return acc


def test_generator_entries():
    g = generator(1.0, 0.0, 1.0)
    assert np.array_equal(
        g.matrix(), np.array([[0, -1, 0], [1, 0, 0], [0, 0, 0]], dtype=float)
    )
    assert np.array_equal(generator(0.0, 0.0, 2.0).matrix(), np.zeros((3, 3)))
    g = generator(0.0, 1.0, 0.5)
    m = g.matrix()
    assert m[2, 1] == 0.5 and m[1, 2] == -0.5
    assert m[0, 1] == m[1, 0] == m[0, 2] == m[2, 0] == 0.0


def test_quarter_turn_in_first_plane():
    r = rodrigues_exp(generator(1.0, 0.0, 1.0), math.pi / 2.0)
    assert np.allclose(r.apply_array([1.0, 0.0, 0.0]), [0.0, 1.0, 0.0], atol=1e-15)


def test_zero_time_is_identity():
    r = rodrigues_exp(generator(0.3, -0.8, 1.7), 0.0)
    assert np.array_equal(r.matrix, np.eye(3))


def test_exponential_against_taylor_series():
    rng = np.random.default_rng(11)
    for _ in range(50):
        g = SkewGenerator(*rng.uniform(-1.5, 1.5, size=3))
        t = float(rng.uniform(-3.0, 3.0))
        r = rodrigues_exp(g, t)
        assert np.max(np.abs(r.matrix - exp_taylor(g.matrix(), t))) < 1e-13
        assert np.max(np.abs(r.matrix.T @ r.matrix - np.eye(3))) < 1e-14


def test_double_bang_axis_angle():
    alpha = 1.7
    g = generator(1.0, 1.0, alpha)
    t = 0.9
    r = rodrigues_exp(g, t)
    angle = math.acos((np.trace(r.matrix) - 1.0) / 2.0)
    assert abs(angle - t * math.sqrt(1.0 + alpha * alpha)) < 1e-12
    axis = g.axis() / g.rate
    assert np.allclose(r.matrix @ axis, axis, atol=1e-14)


def test_small_angle_series_branch():
    g = generator(1.0, 1.0, 1.0)
    for t in (0.0, 1e-9, 1e-7, 5e-7):
        r = rodrigues_exp(g, t)
        assert np.max(np.abs(r.matrix - exp_taylor(g.matrix(), t))) < 1e-15


def test_inverse_and_group_property():
    rng = np.random.default_rng(7)
    for _ in range(100):
        g = SkewGenerator(*rng.uniform(-2.0, 2.0, size=3))
        s, t = rng.uniform(-2.0, 2.0, size=2)
        rs = rodrigues_exp(g, float(s))
        rt = rodrigues_exp(g, float(t))
        rst = rodrigues_exp(g, float(s + t))
        assert np.max(np.abs(rs.compose(rt).matrix - rst.matrix)) < 1e-13
        prod = rodrigues_exp(g, float(s)).compose(rodrigues_exp(g, float(-s)))
        assert np.max(np.abs(prod.matrix - np.eye(3))) < 1e-13


def test_rotation_preserves_state_norm():
    rng = np.random.default_rng(3)
    for _ in range(50):
        v = rng.normal(size=3)
        state = StateS2.from_array(v / np.linalg.norm(v))
        g = SkewGenerator(*rng.uniform(-2.0, 2.0, size=3))
        out = rodrigues_exp(g, float(rng.uniform(-3, 3))).apply(state)
        n2 = out.psi1**2 + out.psi2**2 + out.psi3**2
        assert abs(n2 - 1.0) < 1e-13


def test_bracket_of_the_two_control_fields():
    c = bracket(generator(1.0, 0.0, 1.0), generator(0.0, 1.0, 1.0))
    assert c.m1 == 0.0 and c.m2 == 0.0 and abs(c.m3) == 1.0
    g = generator(0.4, -0.3, 2.0)
    z = bracket(g, g)
    assert z.m1 == z.m2 == z.m3 == 0.0


def test_jacobi_identity():
    rng = np.random.default_rng(5)
    for _ in range(20):
        a, b, c = (SkewGenerator(*rng.uniform(-1, 1, size=3)) for _ in range(3))
        total = (
            bracket(a, bracket(b, c)).matrix()
            + bracket(b, bracket(c, a)).matrix()
            + bracket(c, bracket(a, b)).matrix()
        )
        assert np.max(np.abs(total)) < 1e-13


def test_state_norm_validation():
    with pytest.raises(DomainError):
        StateS2(1.0, 1.0, 0.0)
    s = StateS2(0.6, 0.8, 0.0)
    assert s.in_octant()
    assert not StateS2(-0.6, 0.8, 0.0).in_octant()


def test_rotation_validation():
    with pytest.raises(DomainError):
        Rotation(np.diag([1.0, 2.0, 0.5]))
    with pytest.raises(DomainError):
        Rotation(np.diag([1.0, 1.0, -1.0]))  # orthogonal but det -1
