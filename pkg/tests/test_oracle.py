"""Quadrature and random-search oracles."""

import math

import pytest

from qoct import (
    QuadratureDepthError,
    complete_k,
    min_time_law,
    quadrature,
    sample_search_min_time,
)
from qoct.errors import DomainError


def test_quadrature_constant():
    assert abs(quadrature(lambda x: 1.0, 0.0, math.pi / 2.0, 1e-12) - math.pi / 2.0) < 1e-12


def test_quadrature_polynomial():
    assert abs(quadrature(lambda x: x * x, 0.0, 1.0, 1e-12) - 1.0 / 3.0) < 1e-12


def test_quadrature_matches_complete_k():
    k = 0.5
    val = quadrature(
        lambda s: 1.0 / math.sqrt(1.0 - k * k * math.sin(s) ** 2),
        0.0,
        math.pi / 2.0,
        1e-12,
    )
    assert abs(val - complete_k(0.5)) < 1e-10


def test_quadrature_depth_error():
    with pytest.raises(QuadratureDepthError):
        quadrature(lambda x: math.sqrt(abs(x)), -1.0, 1.0, 1e-300)


def test_search_reproducible_bit_for_bit():
    a = sample_search_min_time(1.0, 1500, 5, seed=99)
    b = sample_search_min_time(1.0, 1500, 5, seed=99)
    assert a == b


def test_search_monotone_in_candidate_count():
    small = sample_search_min_time(1.0, 500, 5, seed=99)[0]
    large = sample_search_min_time(1.0, 2500, 5, seed=99)[0]
    assert large <= small


def test_search_single_bang_recovers_the_optimum():
    best, segs = sample_search_min_time(
        1.0, 2000, 1, seed=7, fixed_controls=(1.0, 1.0)
    )
    assert abs(best - math.pi / math.sqrt(2.0)) < 1e-6
    assert segs is not None and len(segs) == 1


def test_search_never_beats_the_closed_form():
    for alpha in (0.5, 1.0, 2.0):
        best, _ = sample_search_min_time(alpha, 2000, 5, seed=20240817)
        assert best >= min_time_law(alpha).total_duration - 5e-3


def test_search_argument_checks():
    with pytest.raises(DomainError):
        sample_search_min_time(1.0, 0, 5, seed=1)
    with pytest.raises(DomainError):
        sample_search_min_time(-1.0, 10, 5, seed=1)
