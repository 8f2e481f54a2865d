"""Jacobi elliptic functions sn, cn, dn and the complete elliptic integral K.

Modulus convention
------------------
Every function here takes the *modulus* ``k``, not the *parameter*
``m = k**2``.  Libraries disagree on this point (SciPy's ``ellipj`` takes
``m``), so it is worth stating prominently: here ``K(0.5)`` means the
quarter period at modulus one half.

The evaluation uses the descending Landen transformation driven by the
arithmetic-geometric mean, which is uniformly accurate across the modulus
range; the iteration stops once the AGM gap falls below 1e-15.  Moduli within
1e-10 of 0 are routed to the trigonometric closed forms; the hyperbolic route
at k = 1 only engages within a few float ulps, because the Landen chain stays
accurate essentially up to float resolution there and downstream solvers
genuinely operate that close to the degenerate modulus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from . import tolerances as tol
from .errors import DomainError

_MAX_AGM_ITER = 24


@dataclass(frozen=True)
class JacobiTriple:
    """Values of (sn, cn, dn) at a common argument and modulus."""

    sn: float
    cn: float
    dn: float


def complete_k(k: float) -> float:
    """Complete elliptic integral K(k) by the arithmetic-geometric mean.

    K(k) is the quarter period of the Jacobi functions: sn(K; k) = 1.
    Diverges logarithmically as k -> 1, so k = 1 is rejected.

    Args:
        k: modulus, 0 <= k < 1.

    Returns:
        The value of the integral of 1/sqrt(1 - k^2 sin^2 s) over [0, pi/2].
    """
    if not (0.0 <= k < 1.0):
        raise DomainError(f"complete_k requires 0 <= k < 1, got {k!r}")
    a = 1.0
    b = math.sqrt((1.0 - k) * (1.0 + k))
    for _ in range(_MAX_AGM_ITER):
        if abs(a - b) <= tol.AGM_GAP * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (2.0 * a)


def complete_k_comp(kp: float) -> float:
    """K expressed through the complementary modulus kp = sqrt(1 - k^2).

    Equivalent to complete_k(sqrt(1 - kp^2)) but keeps full precision when k
    is too close to one for the difference to survive a round trip through k.
    """
    if not (0.0 < kp <= 1.0):
        raise DomainError(f"complete_k_comp requires 0 < kp <= 1, got {kp!r}")
    a, b = 1.0, kp
    for _ in range(_MAX_AGM_ITER + 16):
        if abs(a - b) <= tol.AGM_GAP * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (2.0 * a)


@lru_cache(maxsize=256)
def _landen_chain(k: float) -> tuple[float, tuple[float, ...], tuple[float, ...]]:
    """Descending-modulus chain shared by all arguments at a fixed modulus."""
    a = 1.0
    mc = (1.0 - k) * (1.0 + k)
    em = []
    en = []
    for _ in range(_MAX_AGM_ITER):
        b = math.sqrt(mc)
        em.append(a)
        en.append(b)
        c = 0.5 * (a + b)
        if abs(a - b) <= tol.AGM_GAP * a:
            break
        mc = b * a
        a = c
    return c, tuple(em), tuple(en)


def jacobi(u: float, k: float) -> JacobiTriple:
    """Jacobi elliptic functions (sn, cn, dn) at argument u and modulus k.

    Args:
        u: real argument, finite.
        k: modulus, 0 <= k <= 1.

    Returns:
        JacobiTriple with absolute accuracy around 1e-14 for k in [0, 0.999].
    """
    if not (0.0 <= k <= 1.0):
        raise DomainError(f"jacobi requires 0 <= k <= 1, got {k!r}")
    if not math.isfinite(u):
        raise DomainError("jacobi argument must be finite")
    if k < tol.ELLIPTIC_DEGENERATE:
        return JacobiTriple(math.sin(u), math.cos(u), 1.0)
    if 1.0 - k < tol.ELLIPTIC_DEGENERATE_ONE:
        sech = 1.0 / math.cosh(u)
        return JacobiTriple(math.tanh(u), sech, sech)

    scale, em, en = _landen_chain(k)
    phase = u * scale
    sn = math.sin(phase)
    cn = math.cos(phase)
    dn = 1.0
    if sn != 0.0:
        # backward Landen recurrence on the function values
        a = cn / sn
        c = scale * a
        for i in range(len(em) - 1, -1, -1):
            b = em[i]
            a *= c
            c *= dn
            dn = (en[i] + a) / (b + a)
            a = c / b
        a = 1.0 / math.sqrt(c * c + 1.0)
        sn = -a if sn < 0.0 else a
        cn = c * sn
    return JacobiTriple(sn, cn, dn)


def jacobi_derived(u: float, k: float) -> tuple[float, float, float]:
    """The quotient functions (cd, sd, nd) = (cn, sn, 1) / dn.

    dn is bounded away from zero for k < 1, and stays positive (it equals
    sech) at k = 1, so the quotients are always well defined here.
    """
    t = jacobi(u, k)
    return t.cn / t.dn, t.sn / t.dn, 1.0 / t.dn
