"""Jacobi functions and K(k) against quadrature and identity oracles."""

import math

import numpy as np
import pytest

from qoct import DomainError, complete_k, jacobi, jacobi_derived
from qoct.oracle import bisect_root, quadrature


def k_by_quadrature(k: float) -> float:
    return quadrature(
        lambda s: 1.0 / math.sqrt(1.0 - k * k * math.sin(s) ** 2),
        0.0,
        math.pi / 2.0,
        1e-12,
    )


def test_complete_k_degenerate():
    assert complete_k(0.0) == math.pi / 2.0


def test_complete_k_against_quadrature():
    for k in (0.1, 0.3, 0.5, 0.7, 0.9, 0.99):
        assert abs(complete_k(k) - k_by_quadrature(k)) < 1e-10


def test_complete_k_domain():
    for bad in (1.0, 1.5, -0.1):
        with pytest.raises(DomainError):
            complete_k(bad)


def test_jacobi_degenerate_moduli():
    j = jacobi(1.0, 0.0)
    assert (j.sn, j.cn, j.dn) == (math.sin(1.0), math.cos(1.0), 1.0)
    j = jacobi(1.0, 1.0)
    sech = 1.0 / math.cosh(1.0)
    assert (j.sn, j.cn, j.dn) == (math.tanh(1.0), sech, sech)


def test_jacobi_domain():
    with pytest.raises(DomainError):
        jacobi(1.0, 1.5)
    with pytest.raises(DomainError):
        jacobi(math.inf, 0.5)


def test_quarter_period_against_quadrature_k():
    k = 0.7
    big_k = k_by_quadrature(k)
    j = jacobi(big_k, k)
    assert abs(j.sn - 1.0) < 1e-10
    assert abs(j.cn) < 1e-10
    assert abs(j.dn - math.sqrt(1.0 - k * k)) < 1e-10


def test_identities_random_sweep():
    rng = np.random.default_rng(123)
    worst = 0.0
    for _ in range(10**4):
        u = float(rng.uniform(-10.0, 10.0))
        k = float(rng.uniform(0.0, 0.999))
        j = jacobi(u, k)
        worst = max(
            worst,
            abs(j.sn**2 + j.cn**2 - 1.0),
            abs(j.dn**2 + k * k * j.sn**2 - 1.0),
        )
    assert worst < 1e-11


def test_periodicity():
    for k in (0.2, 0.6, 0.95):
        period = 4.0 * complete_k(k)
        for u in (-3.0, 0.4, 2.2):
            assert abs(jacobi(u + period, k).sn - jacobi(u, k).sn) < 1e-9


def test_sn_derivative_is_cn_dn():
    h = 1e-5
    rng = np.random.default_rng(77)
    for _ in range(200):
        u = float(rng.uniform(-5.0, 5.0))
        k = float(rng.uniform(0.05, 0.95))
        num = (jacobi(u + h, k).sn - jacobi(u - h, k).sn) / (2.0 * h)
        j = jacobi(u, k)
        ref = j.cn * j.dn
        assert abs(num - ref) <= 1e-6 * max(1.0, abs(ref))


def test_derived_quotients():
    cd, sd, nd = jacobi_derived(0.9, 0.0)
    assert (cd, sd, nd) == (math.cos(0.9), math.sin(0.9), 1.0)
    cd, sd, nd = jacobi_derived(0.0, 0.63)
    assert (cd, sd, nd) == (1.0, 0.0, 1.0)


def test_first_cd_zero_is_quarter_period():
    k = 0.3
    root = bisect_root(lambda u: jacobi_derived(u, k)[0], 1.0, 2.0, 1e-12)
    assert abs(root - complete_k(k)) < 1e-10
