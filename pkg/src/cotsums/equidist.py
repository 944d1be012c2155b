"""Window scans over coprime residues and exponential-sum utilities.

A scan walks every r coprime to b with A0*b <= r <= A1*b, evaluates the
cotangent sum c0(r/b) and the floor-weighted sum Q(r/b) from the shared
cot table, and accumulates normalized moments:

    moments_c0[k] = sum c0(r/b)^k / (b^k  * phi(b)),
    moments_q[k]  = sum  Q(r/b)^k / (b^2k * phi(b)),   k = 1 .. 2*k_max.

The even c0-moments approach H_k*(A1-A0) and the even Q-moments approach
E_k*(A1^{2k+1}-A0^{2k+1}), which is what the moment tests consume.  The
module also carries the inverse-value approximation q_approx, Kloosterman
and Ramanujan sums, the inverse-localization count, and the two-sample
Kolmogorov-Smirnov distance.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import cot_table
from .gseries import EmpiricalCDF, TruncatedGSeries, f_eval

__all__ = [
    "ScanWindow",
    "ScanReport",
    "ExpSumParams",
    "euler_phi",
    "mobius",
    "scan",
    "scan_arrays",
    "batch_c0_vq",
    "window_residues",
    "q_approx",
    "kloosterman",
    "ramanujan",
    "inverse_localization_count",
    "ks_distance",
]


def _factorize(n: int) -> dict[int, int]:
    factors: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def euler_phi(b: int) -> int:
    """Euler totient by trial-division factorization."""
    if b < 1:
        raise ValueError("b >= 1 required")
    out = b
    for p in _factorize(b):
        out -= out // p
    return out


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("n >= 1 required")
    f = _factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


@dataclass(frozen=True)
class ScanWindow:
    """Residue window r/b in (A0, A1) with 1/2 < A0 < A1 < 1."""

    b: int
    a0: float
    a1: float

    def __post_init__(self):
        if self.b < 2:
            raise ValueError("b >= 2 required")
        if not 0.5 < self.a0 < self.a1 < 1.0:
            raise ValueError(f"need 1/2 < A0 < A1 < 1, got ({self.a0}, {self.a1})")
        if math.floor(self.a1 * self.b) < math.ceil(self.a0 * self.b):
            raise ValueError("window contains no integer")

    @property
    def r_lo(self) -> int:
        return math.ceil(self.a0 * self.b)

    @property
    def r_hi(self) -> int:
        return math.floor(self.a1 * self.b)


def window_residues(window: ScanWindow) -> np.ndarray:
    """All r coprime to b in [ceil(A0 b), floor(A1 b)], ascending."""
    r = np.arange(window.r_lo, window.r_hi + 1, dtype=np.int64)
    keep = np.fromiter(
        (math.gcd(int(x), window.b) == 1 for x in r), dtype=bool, count=len(r)
    )
    return r[keep]


def _block_c0_q(rs: np.ndarray, b: int, table: np.ndarray):
    # c0(r/b) = -(1/b) sum_m m*T[(m r) mod b];  Q(r/b) = sum_m T[(m r) mod b]*floor(m r / b)
    m = np.arange(1, b, dtype=np.int64)
    prod = rs[:, None] * m[None, :]
    res = prod % b
    tc = table[res]
    mfloat = m.astype(float)
    c0 = -(tc @ mfloat) / b
    q = np.einsum("ij,ij->i", tc, (prod // b).astype(float))
    return c0, q


def scan_arrays(window: ScanWindow, threads: int = 1):
    """Per-residue raw values: (r, c0(r/b), Q(r/b)) over the window.

    Blocks of residues are evaluated against the shared cot table and written
    into position-indexed output slots, so the result is identical for any
    thread count.
    """
    b = window.b
    rs = window_residues(window)
    table = cot_table(b)
    c0 = np.empty(len(rs))
    q = np.empty(len(rs))
    block = max(1, min(64, 4_000_000 // max(b, 1)))
    spans = [(i, min(i + block, len(rs))) for i in range(0, len(rs), block)]

    def run(span):
        lo, hi = span
        c0[lo:hi], q[lo:hi] = _block_c0_q(rs[lo:hi], b, table)

    if threads > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run, spans))
    else:
        for span in spans:
            run(span)
    return rs, c0, q


def batch_c0_vq(b: int):
    """(r, c0, V, Q) for every r in 1..b-1 coprime to b, by table lookups.

    V here is the inverse-argument sum sum_m {m r / b} cot(pi m / b); the
    identity suites check it against -c0(r*/b) from the scalar route.
    """
    if b < 2:
        raise ValueError("b >= 2 required")
    r_all = np.arange(1, b, dtype=np.int64)
    keep = np.fromiter((math.gcd(int(x), b) == 1 for x in r_all), dtype=bool, count=b - 1)
    rs = r_all[keep]
    table = cot_table(b)
    m = np.arange(1, b, dtype=np.int64)
    mfloat = m.astype(float)
    t_m = table[1:b]
    c0 = np.empty(len(rs))
    v = np.empty(len(rs))
    q = np.empty(len(rs))
    block = max(1, 4_000_000 // max(b, 1))
    for lo in range(0, len(rs), block):
        sub = rs[lo : lo + block]
        prod = sub[:, None] * m[None, :]
        res = prod % b
        tc = table[res]
        c0[lo : lo + block] = -(tc @ mfloat) / b
        q[lo : lo + block] = np.einsum("ij,ij->i", tc, (prod // b).astype(float))
        v[lo : lo + block] = (res.astype(float) @ t_m) / b
    return rs, c0, v, q


@dataclass
class ScanReport:
    """Normalized window moments plus the empirical CDF of c0(r/b)/b."""

    b: int
    a0: float
    a1: float
    phi: int
    count: int
    moments_c0: dict[int, float]
    moments_q: dict[int, float]
    cdf: EmpiricalCDF | None = None
    ks_distance: float | None = None
    wall_ms: float = 0.0
    residues: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.count > self.phi:
            raise ValueError("window count exceeds phi(b)")
        for k, v in self.moments_c0.items():
            if k % 2 == 0 and v < 0.0:
                raise ValueError("even normalized moment must be nonnegative")
        for k, v in self.moments_q.items():
            if k % 2 == 0 and v < 0.0:
                raise ValueError("even normalized moment must be nonnegative")


def scan(
    window: ScanWindow,
    k_max: int,
    *,
    threads: int = 1,
    reference: EmpiricalCDF | None = None,
    deterministic: bool = False,
) -> ScanReport:
    """Moment scan over the window; powers 1..2*k_max of both sums.

    Accumulation is an exactly-rounded sum over the position-ordered value
    array, so reports are bit-identical across reruns and thread counts.
    With `deterministic` the wall-clock field is zeroed as well.  A
    `reference` CDF turns on the Kolmogorov-Smirnov comparison.
    """
    if k_max < 1:
        raise ValueError("k_max >= 1 required")
    tic = time.perf_counter()
    b = window.b
    rs, c0, q = scan_arrays(window, threads=threads)
    if len(rs) == 0:
        raise ValueError("window contains no admissible residue")
    phi = euler_phi(b)
    moments_c0: dict[int, float] = {}
    moments_q: dict[int, float] = {}
    for k in range(1, 2 * k_max + 1):
        moments_c0[k] = math.fsum((c0**k).tolist()) / (float(b) ** k * phi)
        moments_q[k] = math.fsum((q**k).tolist()) / (float(b) ** (2 * k) * phi)
    cdf = EmpiricalCDF.from_samples(c0 / b)
    ks = ks_distance(cdf, reference) if reference is not None else None
    wall = 0.0 if deterministic else (time.perf_counter() - tic) * 1e3
    return ScanReport(
        b=b,
        a0=window.a0,
        a1=window.a1,
        phi=phi,
        count=len(rs),
        moments_c0=moments_c0,
        moments_q=moments_q,
        cdf=cdf,
        ks_distance=ks,
        wall_ms=wall,
        residues=rs,
    )


def q_approx(r: int, b: int, m1: int) -> float:
    """(b r / pi) * f(b*/r; m1) with b b* = 1 (mod r): the series model of Q.

    The sawtooth arguments l*b*/r are reduced exactly in integers, so the
    value is free of phase rounding.
    """
    if r < 2:
        raise ValueError("r >= 2 required (Q(1/b) = 0 is exact upstream)")
    if math.gcd(r, b) != 1:
        raise ValueError(f"gcd(r, b) = {math.gcd(r, b)} != 1")
    bstar = pow(b, -1, r)
    t = TruncatedGSeries(m1)
    if t.terms * bstar < (1 << 62):
        l = np.arange(1, t.terms + 1, dtype=np.int64)
        res = (l * bstar) % r
        saw = 1.0 - 2.0 * (res / r)
        saw[res == 0] = 0.0
        total = float(saw @ (1.0 / l))
    else:
        total = math.fsum(
            (1.0 - 2.0 * ((l * bstar) % r) / r) / l if (l * bstar) % r else 0.0
            for l in range(1, t.terms + 1)
        )
    return b * r / math.pi * total


@dataclass(frozen=True)
class ExpSumParams:
    """Frequencies (n, m) and modulus b of a complete exponential sum."""

    n: int
    m: int
    b: int

    def __post_init__(self):
        if self.b < 2:
            raise ValueError("b >= 2 required")


def kloosterman(p: ExpSumParams) -> tuple[float, float]:
    """K(n, m, b) = sum over units r mod b of e((n r + m r*)/b).

    The integer phases (n r + m r*) mod b are sorted before the trig pass, so
    swapping n and m (a bijection r <-> r*) yields the bit-identical result.
    """
    b = p.b
    phases = sorted(
        (p.n * r + p.m * pow(r, -1, b)) % b for r in range(1, b) if math.gcd(r, b) == 1
    )
    angles = 2.0 * np.pi * (np.array(phases, dtype=float) / b)
    re = math.fsum(np.cos(angles).tolist())
    im = math.fsum(np.sin(angles).tolist())
    return re, im


def ramanujan(q: int, n: int) -> int:
    """c_q(n) by the Moebius-divisor formula sum_{d | (q, n)} mu(q/d) d."""
    if q < 1:
        raise ValueError("q >= 1 required")
    g = math.gcd(q, abs(n))
    total = 0
    for d in range(1, g + 1):
        if g % d == 0:
            total += mobius(q // d) * d
    return total


def inverse_localization_count(
    window: ScanWindow, alpha: float, delta: float
) -> tuple[int, float]:
    """How many r in the window put b*/r in [alpha, alpha+delta), b b* = 1 (mod r).

    The interval is clipped to (0, 1); expected count is
    (hi - alpha) * (A1 - A0) * phi(b) from the equidistribution of inverses.
    Half-open pieces make disjoint partitions add up exactly.
    """
    if not 0.0 < alpha < 1.0 or delta <= 0.0:
        raise ValueError("need 0 < alpha < 1 and delta > 0")
    hi = min(alpha + delta, 1.0)
    b = window.b
    count = 0
    for r in window_residues(window).tolist():
        x = pow(b, -1, r) / r if r > 1 else 0.0
        if alpha <= x < hi:
            count += 1
    expected = (hi - alpha) * (window.a1 - window.a0) * euler_phi(b)
    return count, expected


def ks_distance(a: EmpiricalCDF, b_cdf: EmpiricalCDF) -> float:
    """Two-sample sup distance, checked on both sides of every jump."""
    xs = np.concatenate([a.values, b_cdf.values])
    d_right = np.abs(
        np.searchsorted(a.values, xs, side="right") / a.count
        - np.searchsorted(b_cdf.values, xs, side="right") / b_cdf.count
    )
    d_left = np.abs(
        np.searchsorted(a.values, xs, side="left") / a.count
        - np.searchsorted(b_cdf.values, xs, side="left") / b_cdf.count
    )
    return float(max(d_right.max(), d_left.max()))
