"""Exact evaluation of the cotangent sum c0(r/b) and its relatives.

c0(r/b) = -sum_{m=1}^{b-1} (m/b) cot(pi m r / b) for gcd(r, b) = 1, together
with the Vasyunin sum V, the floor-weighted sum Q, the Estermann value at the
origin, and two identity checks (a fractional-part identity and the
reciprocity defect).  Everything here is scalar and deterministic; the bulk
scanning machinery lives in `cotsums.equidist`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "ReducedFraction",
    "SumValue",
    "mod_inverse",
    "c0",
    "vasyunin",
    "q_sum",
    "estermann_at_zero",
    "fractional_identity_check",
    "reciprocity_defect",
]

_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class ReducedFraction:
    """Argument r/b of the sums: coprime, 1 <= r <= b, b >= 2."""

    r: int
    b: int

    def __post_init__(self):
        if self.b < 2:
            raise ValueError(f"b must be >= 2, got {self.b}")
        if not 1 <= self.r <= self.b:
            raise ValueError(f"r must lie in [1, b], got r={self.r}, b={self.b}")
        if math.gcd(self.r, self.b) != 1:
            raise ValueError(f"{self.r}/{self.b} is not reduced")

    @property
    def inverse(self) -> int:
        """r-bar with r * r-bar == 1 (mod b)."""
        return mod_inverse(self.r, self.b)


@dataclass(frozen=True)
class SumValue:
    """A compensated-summation result with a rounding-error estimate."""

    value: float
    err_bound: float
    terms: int

    def __post_init__(self):
        if self.err_bound < 0 or self.terms < 0:
            raise ValueError("err_bound and terms must be nonnegative")
        if not math.isfinite(self.value):
            raise ValueError("value must be finite")


def mod_inverse(a: int, m: int) -> int:
    """Inverse of a modulo m, in [1, m-1].  Requires gcd(a, m) = 1."""
    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    if math.gcd(a, m) != 1:
        raise ValueError(f"{a} is not invertible mod {m}")
    return pow(a, -1, m)


@lru_cache(maxsize=64)
def cot_table(b: int) -> np.ndarray:
    """cot(pi j / b) for j = 0..b-1, with the mirror half filled by negation.

    T[0] is never a valid index for a reduced fraction and is set to 0.
    T[b/2] (even b) is pinned to exactly 0 so that c0(1/2) comes out exact.
    The mirror fill T[b-j] = -T[j] makes oddness of c0 exact in floats.
    """
    if b < 2:
        raise ValueError(f"b must be >= 2, got {b}")
    t = np.zeros(b)
    j = np.arange(1, (b + 1) // 2)
    t[j] = 1.0 / np.tan(np.pi * j / b)
    if b % 2 == 0:
        t[b // 2] = 0.0
    t[b - j] = -t[j]
    t.flags.writeable = False
    return t


def _compensated(terms) -> tuple[float, float, int]:
    # Kahan-Babuska (Neumaier) running sum; returns (sum, max|term|, count).
    s = 0.0
    comp = 0.0
    biggest = 0.0
    n = 0
    for x in terms:
        n += 1
        ax = abs(x)
        if ax > biggest:
            biggest = ax
        t = s + x
        if abs(s) >= ax:
            comp += (s - t) + x
        else:
            comp += (x - t) + s
        s = t
    return s + comp, biggest, n


def _dd_sum(terms) -> float:
    # Double-double accumulation (error-free TwoSum at every step).
    hi = 0.0
    lo = 0.0
    for x in terms:
        s = hi + x
        bv = s - hi
        err = (hi - (s - bv)) + (x - bv)
        lo += err
        hi = s
        # renormalize
        s = hi + lo
        lo = lo - (s - hi)
        hi = s
    return hi + lo


def _sum_value(gen_factory, oracle: bool) -> SumValue:
    value, biggest, n = _compensated(gen_factory())
    if oracle:
        value = _dd_sum(gen_factory())
    return SumValue(value=value, err_bound=n * _EPS * biggest, terms=n)


def c0(f: ReducedFraction, oracle: bool = False) -> SumValue:
    """c0(r/b) = -sum_{m=1}^{b-1} (m/b) cot(pi m r / b).

    Terms are generated in ascending m; the cotangent argument is reduced in
    integer arithmetic first (m*r mod b), so no accuracy is lost to large
    angles.  Pole-adjacent terms reach ~b/pi, which dominates err_bound.

    With oracle=True the same terms are re-accumulated in double-double
    arithmetic; the default compensated value must agree to ~1e-9 relative.
    """
    r, b = f.r, f.b
    t = cot_table(b).tolist()

    def gen():
        for m in range(1, b):
            yield -(m / b) * t[(m * r) % b]

    return _sum_value(gen, oracle)


def vasyunin(f: ReducedFraction, oracle: bool = False) -> SumValue:
    """V(r/b) = sum_{m=1}^{b-1} {m r / b} cot(pi m / b).

    Satisfies V(r/b) = -c0(rbar/b) where r*rbar == 1 (mod b).
    """
    r, b = f.r, f.b
    t = cot_table(b).tolist()

    def gen():
        for m in range(1, b):
            yield ((m * r) % b) / b * t[m]

    return _sum_value(gen, oracle)


def q_sum(f: ReducedFraction, oracle: bool = False) -> SumValue:
    """Q(r/b) = sum_{m=1}^{b-1} cot(pi m r / b) * floor(r m / b).

    Links the general value to the r = 1 case:
    c0(r/b) = (1/r) c0(1/b) - (1/r) Q(r/b).
    """
    r, b = f.r, f.b
    t = cot_table(b).tolist()

    def gen():
        for m in range(1, b):
            mr = m * r
            yield t[mr % b] * float(mr // b)

    return _sum_value(gen, oracle)


def estermann_at_zero(f: ReducedFraction) -> tuple[float, float]:
    """Value at the origin of the associated divisor-twisted Dirichlet series.

    Returns the (re, im) pair (1/4, c0(r/b)/2).
    """
    return 0.25, 0.5 * c0(f).value


def fractional_identity_check(a: int, n: int, f: ReducedFraction) -> float:
    """Residual of the finite-sum formula for the fractional part {n a / b}.

    Checks the stride-r form
        {na/b} = 1/2 - (1/(2b)) sum_m cot(pi m r/b) sin(2 pi m nra/b)
    and the companion vanishing cosine sum
        sum_m cot(pi m r/b) cos(2 pi m nra/b) = 0,
    returning the larger of the two absolute residuals.  Reindexing m by
    m*rbar collapses the stride to 1, so the same fractional part comes out
    for every unit r; r = 1 is the plain expansion.  Requires b not to
    divide n*a.
    """
    r, b = f.r, f.b
    if (n * a) % b == 0:
        raise ValueError(f"b={b} divides n*a={n * a}; identity hypotheses fail")
    t = cot_table(b)
    k = (n * r * a) % b
    m = np.arange(1, b)
    phase = 2.0 * np.pi * ((m * k) % b) / b
    cots = t[(m * r) % b]
    sin_sum = float(cots @ np.sin(phase))
    cos_sum = float(cots @ np.cos(phase))
    frac = ((n * a) % b) / b
    res_sin = abs(frac - (0.5 - sin_sum / (2.0 * b)))
    return max(res_sin, abs(cos_sum) / (2.0 * b))


def reciprocity_defect(f: ReducedFraction) -> float:
    """D(r/b) = c0(r/b) + (b/r) c0((b mod r)/r) - 1/(pi r).

    The second argument uses period 1 of c0 to read c0(b/r) as
    c0((b mod r)/r); this needs r >= 2.  Along rational sequences r_n/b_n
    converging to an irrational x the defect converges (a smoothness
    statement tested as a Cauchy property).
    """
    r, b = f.r, f.b
    if r < 2:
        raise ValueError("reciprocity defect needs r >= 2")
    inner = ReducedFraction(b % r, r)
    return c0(f).value + (b / r) * c0(inner).value - 1.0 / (math.pi * r)
