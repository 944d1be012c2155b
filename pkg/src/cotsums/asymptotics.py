"""Asymptotics of c0(1/b) and the secondary coefficient C1(r, b0).

The expansion implemented by `c0_asymptotic` is

    c0(1/b) = (b/pi) log b - (b/pi)(log 2pi - gamma) + 1/pi
              + sum_{l<=n} E_l b^{-l} + O(b^{-(n+1)}),

with E_l = (B_{2j}/j) zeta(2j) / pi for odd l = 2j-1 and E_l = 0 for even l.
The constant term is +1/pi and the E_l above are the coefficients the data
actually follows (fitting residuals at the 1e-19 level); `coeff_E` keeps the
alternative closed combination built from the D_{2,nu} constants, which does
not reduce the residual and is retained for reference with its own anchors.

Also here: Bernoulli numbers, a real-argument zeta, the generalized
Euler-Maclaurin summation with a remainder bound, the partial sums S(L;b) and
G_L(b) converging to pi*c0(1/b), the constants D1 and D_{2,nu}, the
partial-fraction function g*, P1 integrals, and the closed-form C1 with its
empirical cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .core import ReducedFraction, c0, cot_table

__all__ = [
    "AsymptoticExpansion",
    "EulerMaclaurinSpec",
    "C1Input",
    "bernoulli",
    "zeta_real",
    "euler_maclaurin_sum",
    "s_sum",
    "g_partial",
    "const_D1",
    "const_D2",
    "coeff_E",
    "c0_asymptotic",
    "gstar",
    "gstar_integral",
    "p1_integral",
    "c1_direct",
    "c1_empirical",
]

GAMMA = 0.5772156649015328606
_LOG2PI = math.log(2.0 * math.pi)


@lru_cache(maxsize=None)
def _bernoulli_fraction(n: int) -> Fraction:
    # sum_{k=0}^{n} C(n+1, k) B_k = 0, exact rationals.
    if n == 0:
        return Fraction(1)
    acc = Fraction(0)
    for k in range(n):
        acc += math.comb(n + 1, k) * _bernoulli_fraction(k)
    return -acc / (n + 1)


def bernoulli(n: int) -> float:
    """Signed Bernoulli number B_n (B_1 = -1/2, B_2 = 1/6, B_4 = -1/30).

    Odd n > 1 returns exactly 0.  Even n is limited to n <= 60; beyond that
    the magnitudes are outside what this library ever needs.
    """
    if n < 1 or n > 60:
        raise ValueError(f"Bernoulli index out of supported range: {n}")
    if n % 2 == 1:
        return -0.5 if n == 1 else 0.0
    return float(_bernoulli_fraction(n))


def zeta_real(s: float) -> float:
    """zeta(s) for real s > 1, to ~1e-13 relative or better.

    Direct summation to K = 256 plus the Euler-Maclaurin tail with 8
    Bernoulli corrections.
    """
    if s <= 1.0:
        raise ValueError(f"zeta_real needs s > 1, got {s}")
    k_cut = 256
    total = math.fsum(k ** (-s) for k in range(1, k_cut))
    total += 0.5 * k_cut ** (-s) + k_cut ** (1.0 - s) / (s - 1.0)
    poch = s
    kpow = k_cut ** (-s - 1.0)
    for j in range(1, 9):
        total += bernoulli(2 * j) / math.factorial(2 * j) * poch * kpow
        poch *= (s + 2 * j - 1) * (s + 2 * j)
        kpow /= k_cut * k_cut
    return total


@dataclass
class EulerMaclaurinSpec:
    """Input bundle for the generalized Euler summation formula.

    `f` is the integrand; `derivative(order, x)` must supply odd-order
    derivatives up to 2N+1 (order 2N+1 is only needed for the remainder
    bound); `integral` is the exact or precomputed value of
    int_0^Z f(u) du.
    """

    N: int
    Z: float
    f: Callable[[float], float]
    derivative: Callable[[int, float], float]
    integral: float

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N >= 1 required")
        if self.Z < 0:
            raise ValueError("Z >= 0 required")


def euler_maclaurin_sum(spec: EulerMaclaurinSpec) -> tuple[float, float]:
    """sum_{nu=0}^{Z} f(nu) via the Euler-Maclaurin formula.

    Returns (estimate, remainder_bound).  The estimate is

        (f(0)+f(Z))/2 + int_0^Z f + sum_{j<=N} B_{2j}/(2j)! (f^(2j-1)(Z) - f^(2j-1)(0))

    and the bound multiplies int_0^Z |f^(2N+1)| by the sup of the periodized
    Bernoulli factor, using max |B_{2N+1}({x})| <= 2 (2N+1)! zeta(2N+1) / (2pi)^{2N+1}.
    """
    n_corr, z = spec.N, spec.Z

    def deriv(order: int, x: float) -> float:
        try:
            v = spec.derivative(order, x)
        except Exception as exc:
            raise ValueError(f"derivative of order {order} unavailable") from exc
        if v is None:
            raise ValueError(f"derivative of order {order} unavailable")
        return v

    estimate = 0.5 * (spec.f(0.0) + spec.f(z)) + spec.integral
    for j in range(1, n_corr + 1):
        estimate += (
            bernoulli(2 * j)
            / math.factorial(2 * j)
            * (deriv(2 * j - 1, z) - deriv(2 * j - 1, 0.0))
        )

    # midpoint quadrature of |f^(2N+1)| is plenty for a bound
    order = 2 * n_corr + 1
    panels = 4096
    h = z / panels if panels else 0.0
    integ_abs = 0.0
    if z > 0:
        xs = (np.arange(panels) + 0.5) * h
        integ_abs = float(sum(abs(deriv(order, float(x))) for x in xs) * h)
    factor = 2.0 * zeta_real(order) / (2.0 * math.pi) ** order
    return estimate, factor * integ_abs


def s_sum(L: int, b: int) -> float:
    """S(L; b) = 2b sum_{1<=a<=L} (1/a) floor(a/b)."""
    if L < 1 or b < 2:
        raise ValueError("need L >= 1 and b >= 2")
    a = np.arange(1, L + 1, dtype=np.int64)
    terms = (a // b) / a
    return 2.0 * b * math.fsum(terms.tolist())


def g_partial(L: int, b: int) -> float:
    """Partial sum G_L(b) over a <= L with b not dividing a.

    pi * c0(1/b) is the L -> infinity limit; convergence is O(b/L).
    """
    if L < 1 or b < 2:
        raise ValueError("need L >= 1 and b >= 2")
    total = 0.0
    chunk = 1 << 20
    for lo in range(1, L + 1, chunk):
        a = np.arange(lo, min(lo + chunk, L + 1), dtype=np.int64)
        term = (b / a) * (1.0 + 2.0 * (a // b)) - 2.0
        term[a % b == 0] = 0.0
        total += math.fsum(term.tolist())
    return total


def const_D1() -> float:
    """D1 = sum_{nu>=3} (-1)^{nu+1} zeta(nu-1)/nu.

    The zeta(nu-1) = 1 + (zeta(nu-1) - 1) split is summed separately: the
    harmonic part telescopes to log 2 - 1/2 exactly, and the remainder is an
    alternating series whose increments drop below 1e-15 (at nu = 46).
    """
    total = math.log(2.0) - 0.5
    nu = 3
    while True:
        inc = (zeta_real(nu - 1.0) - 1.0) / nu
        total += inc if nu % 2 == 1 else -inc
        if inc < 1e-15:
            return total
        nu += 1


def const_D2(nu: int) -> float:
    """D_{2,nu} = sum_{k>=1} k (k^{-nu} - (k+1)^{-nu}), nu >= 2.

    Summed literally to k = 10^4 with compensated accumulation, then closed
    with the telescoped tail
        (K+1)^{1-nu} + sum_{k>=K+2} k^{-nu},
    whose zeta-like piece is evaluated by the same Euler-Maclaurin tail as
    `zeta_real`.  Numerically equals zeta(nu).
    """
    if nu < 2:
        raise ValueError("nu >= 2 required")
    cut = 10_000
    k = np.arange(1, cut + 1, dtype=float)
    partial = math.fsum((k * (k ** (-float(nu)) - (k + 1.0) ** (-float(nu)))).tolist())
    m = cut + 2
    s = float(nu)
    tail = 0.5 * m ** (-s) + m ** (1.0 - s) / (s - 1.0)
    poch = s
    mpow = m ** (-s - 1.0)
    for j in range(1, 9):
        tail += bernoulli(2 * j) / math.factorial(2 * j) * poch * mpow
        poch *= (s + 2 * j - 1) * (s + 2 * j)
        mpow /= m * m
    return partial + (cut + 1.0) ** (1.0 - s) + tail


def coeff_E(l: int, n: int) -> float:
    """The closed D_{2,l+1} combination for the l-th expansion coefficient.

    E_l = (2/(l+1) - 2) D_{2,l+1}
          + sum_{j <= (l+1)/2, j <= N} (B_{2j}/j) C(-2j, l+1-2j) D_{2,l+1},
    N = floor(n/2) + 1, with the generalized binomial
    C(-2j, m) = (-1)^m C(2j+m-1, m) and signed Bernoulli numbers.

    Note: this combination does *not* match the coefficients the residual
    data follows (see `c0_asymptotic`); it is kept as specified, pinned by
    its own regression anchors.
    """
    if l < 1 or l > n:
        raise ValueError(f"need 1 <= l <= n, got l={l}, n={n}")
    d = const_D2(l + 1)
    total = (2.0 / (l + 1) - 2.0) * d
    n_cap = n // 2 + 1
    for j in range(1, min((l + 1) // 2, n_cap) + 1):
        m = l + 1 - 2 * j
        gen_binom = (-1) ** m * math.comb(2 * j + m - 1, m)
        total += bernoulli(2 * j) / j * gen_binom * d
    return total


def _true_coeff(l: int) -> float:
    # E_l of the fitted expansion: (B_{2j}/j) zeta(2j)/pi at odd l = 2j-1, else 0.
    if l % 2 == 0:
        return 0.0
    j = (l + 1) // 2
    return bernoulli(2 * j) / j * zeta_real(2.0 * j) / math.pi


@dataclass(frozen=True)
class AsymptoticExpansion:
    """Coefficient bundle for c0(1/b): main term plus E_1..E_n."""

    order_n: int
    coeffs_E: tuple[float, ...] = field(default=())

    @staticmethod
    def main(b: float) -> float:
        return (b / math.pi) * math.log(b) - (b / math.pi) * (_LOG2PI - GAMMA) + 1.0 / math.pi

    @classmethod
    def build(cls, n: int) -> "AsymptoticExpansion":
        if n < 0:
            raise ValueError("order must be >= 0")
        return cls(order_n=n, coeffs_E=tuple(_true_coeff(l) for l in range(1, n + 1)))


def c0_asymptotic(b: int, n: int) -> tuple[float, float]:
    """Expansion value for c0(1/b) through order n, plus |E_n| b^{-n}.

    Valid for b >= 6 (floor(n/2) + 1); smaller b raises.  The second return
    value is the magnitude of the last included term, a cheap convergence
    diagnostic (0.0 when n = 0).
    """
    threshold = 6 * (n // 2 + 1)
    if b < threshold:
        raise ValueError(f"b={b} below validity threshold {threshold} for n={n}")
    exp = AsymptoticExpansion.build(n)
    value = exp.main(float(b))
    for l, e in enumerate(exp.coeffs_E, start=1):
        value += e * float(b) ** (-l)
    last = abs(exp.coeffs_E[-1]) * float(b) ** (-n) if n >= 1 else 0.0
    return value, last


@lru_cache(maxsize=1)
def _zeta_even_table() -> tuple[float, ...]:
    return tuple(zeta_real(2.0 * k) for k in range(1, 40))


def gstar(z: float) -> float:
    """g*(z) = pi cot(pi z) - 1/z - 1/(z-1) on (0, 1).

    The removable endpoint behavior is handled by the power series
    g*(z) = 1/(1-z) - 2 sum_{k>=1} zeta(2k) z^{2k-1} for z < 1/4 and by the
    exact reflection g*(z) = -g*(1-z) for z > 3/4, so values near 0 and 1
    stay fully accurate (limits +1 and -1).
    """
    if not 0.0 < z < 1.0:
        raise ValueError(f"gstar needs z in (0,1), got {z}")
    if z > 0.75:
        return -gstar(1.0 - z)
    if z >= 0.25:
        return math.pi / math.tan(math.pi * z) - 1.0 / z - 1.0 / (z - 1.0)
    acc = 0.0
    zpow = z
    z2 = z * z
    for zeta2k in _zeta_even_table():
        term = zeta2k * zpow
        acc += term
        if term < 1e-17:
            break
        zpow *= z2
    return 1.0 / (1.0 - z) - 2.0 * acc


def gstar_integral(nodes: int = 128) -> float:
    """int_0^1 g*(w) dw by Gauss-Legendre; equals 0 analytically."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    x = 0.5 * (x + 1.0)
    return 0.5 * float(sum(wi * gstar(float(xi)) for xi, wi in zip(x, w)))


@lru_cache(maxsize=4096)
def p1_integral(s: int, r: int, tol: float = 1e-14) -> float:
    """int_0^infty P1(u) / (s + u r)^2 du, with P1(x) = {x} - 1/2.

    Unit intervals integrate in closed form: the k-th piece equals
    phi(t)/r^2 with t = r/(s + k r) and phi(t) = log(1+t) - t(1+t/2)/(1+t).
    For small t that expression cancels catastrophically, so t < 1/8 switches
    to the alternating series phi(t) = sum_{j>=3} (-1)^{j+1} (1/j - 1/2) t^j.
    Intervals are added until the per-interval envelope 1/(8 (s+Kr)^2) is
    below tol.
    """
    if s < 1 or r < 1:
        raise ValueError("need s >= 1 and r >= 1")
    k_cut = max(16, math.ceil((math.sqrt(1.0 / (8.0 * tol)) - s) / r) + 1)
    total = 0.0
    chunk = 1 << 20
    for lo in range(0, k_cut, chunk):
        w = s + np.arange(lo, min(lo + chunk, k_cut), dtype=float) * r
        t = r / w
        big = t >= 0.125
        out = np.empty_like(t)
        tb = t[big]
        out[big] = np.log1p(tb) - tb * (1.0 + 0.5 * tb) / (1.0 + tb)
        ts = t[~big]
        acc = np.zeros_like(ts)
        tpow = ts * ts * ts
        j = 3
        while True:
            coef = (1.0 / j - 0.5) * (1.0 if j % 2 == 1 else -1.0)
            acc += coef * tpow
            if j > 3 and abs(coef) * (0.125 ** j) < 1e-18:
                break
            tpow = tpow * ts
            j += 1
        out[~big] = acc
        total += float(np.sum(out)) / (r * r)
    return total


@dataclass
class C1Input:
    """Residue data (s_j, t_j) behind the closed form of C1(r, b0).

    s_j = -b0*j mod r and t_j = b0*(j+1) mod r, representatives in [1, r]
    with residue 0 mapped to r so logs and reciprocals stay finite.
    """

    r: int
    b0: int
    s: list[int] = field(init=False)
    t: list[int] = field(init=False)

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("r >= 1 required")
        if math.gcd(self.b0, self.r) != 1:
            raise ValueError(f"gcd(b0, r) must be 1, got ({self.b0}, {self.r})")
        self.s = [((-self.b0 * j) % self.r) or self.r for j in range(self.r)]
        self.t = [((self.b0 * (j + 1)) % self.r) or self.r for j in range(self.r)]


def c1_direct(inp: C1Input) -> float:
    """Closed form of the linear coefficient C1(r, b0); C1(1, .) = 0.

    Four terms: the log and reciprocal sums over the residues, the P1
    integral differences, and the g* integral term -(sum j)/r^2 int_0^1 g*.
    The last integral is ~1e-17 but is computed, not assumed away.
    """
    r = inp.r
    if r == 1:
        return 0.0
    log_term = sum(j * math.log(inp.s[j] / inp.t[j]) for j in range(r)) / (math.pi * r * r)
    rec_term = sum(j * (1.0 / inp.s[j] - 1.0 / inp.t[j]) for j in range(r)) / (2.0 * math.pi * r)
    p1_term = sum(
        j * (p1_integral(inp.s[j], r) - p1_integral(inp.t[j], r)) for j in range(r)
    ) / math.pi
    g_term = (r * (r - 1) // 2) / (r * r) * gstar_integral()
    return log_term - rec_term + p1_term - g_term


def _c0_fast(r: int, b: int) -> float:
    # vectorized c0(r/b) for the empirical fits; fixed-shape pairwise reduction
    t = cot_table(b)
    m = np.arange(1, b, dtype=np.int64)
    return -float(t[(m * r) % b] @ (m / b))


def default_b_list(r: int, b0: int, bmax: int) -> list[int]:
    """Moduli b == b0 (mod r), coprime to r, with b > 2r, up to bmax.

    For r = 1 every residue class coincides; odd b only, which keeps the
    sampling pattern of the fits uniform across the r = 1 and r = 2 cases.
    """
    if r == 1:
        return list(range(3, bmax + 1, 2))
    out = []
    b = b0 if b0 > 0 else b0 + r
    while b <= bmax:
        if b > 2 * r and math.gcd(b, r) == 1:
            out.append(b)
        b += r
    return out


def c1_empirical(r: int, b0: int, b_list: Sequence[int]) -> tuple[float, float]:
    """Least-squares slope of y(b) = c0(r/b) - leading terms, with confidence.

    y(b) = c0(r/b) - (1/(pi r)) b log b + (b/(pi r)) (log 2pi - gamma) behaves
    like C1(r,b0) * b + O(log b) along b == b0 (mod r).  The fit is
    unweighted; confidence is the worst deviation of y from the slope term
    alone over the top half of the b range, divided by the range, i.e. how
    well the slope explains the signal per unit b with the O(1) part treated
    as nuisance.
    """
    if len(b_list) < 3:
        raise ValueError("b_list must contain at least 3 values")
    prev = 0
    for b in b_list:
        if b % r != b0 % r or math.gcd(b, r) != 1:
            raise ValueError(f"b={b} incompatible with (r={r}, b0={b0})")
        if b <= prev:
            raise ValueError("b_list must be strictly increasing")
        prev = b
    bf = np.asarray(b_list, dtype=float)
    ys = np.array(
        [
            _c0_fast(r, b)
            - bv * math.log(bv) / (math.pi * r)
            + bv * (_LOG2PI - GAMMA) / (math.pi * r)
            for b, bv in zip(b_list, bf)
        ]
    )
    n = len(bf)
    sx, sy = bf.sum(), ys.sum()
    sxx, sxy = float(bf @ bf), float(bf @ ys)
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx)
    top = bf >= 0.5 * (bf[0] + bf[-1])
    confidence = float(np.max(np.abs(ys[top] - slope * bf[top]))) / (bf[-1] - bf[0])
    return slope, confidence
