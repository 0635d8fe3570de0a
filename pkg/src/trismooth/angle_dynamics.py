"""Angle-space dynamics of the pairwise-mean triangle transformation.

A triangle's similarity class is fixed by its three inner angles.  The
transformation studied here replaces each angle by the mean of the other
two, which drives every non-degenerate triangle toward the equilateral
one.  Because the map is linear, its n-th power has a closed form; this
module provides the map, its closed-form powers, the min/max-angle
quality measure with non-recursive step predictions, and the machinery
to verify the exact 1/4 contraction per double step.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

PI = math.pi
THIRD_PI = math.pi / 3.0

#: Angles within this distance of 0 or pi mark a triple as degenerate.
DEGENERACY_EPS = 1e-9

#: Angle sums farther than this from pi are rejected; closer ones are repaired.
SUM_REPAIR_TOL = 1e-9

#: Above this power, closed-form evaluation switches to deviation form.
CLOSED_FORM_CAP = 500


class DegenerateTriangleError(ValueError):
    """The operation requires a non-degenerate triangle."""


class EquilateralTriangleError(ValueError):
    """The operation is undefined at the equilateral fixed point."""


@dataclass(frozen=True, slots=True)
class AngleTriple:
    """Labeled inner angles of a triangle, in radians, summing to pi.

    Sums within ``SUM_REPAIR_TOL`` of pi are repaired by uniform scaling;
    anything farther off is rejected.  Angles outside
    ``(eps, pi - eps)`` do not fail construction -- they mark the triple
    as degenerate, and operations that need non-degeneracy raise.
    """

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self) -> None:
        total = self.alpha + self.beta + self.gamma
        if not math.isfinite(total) or abs(total - PI) > SUM_REPAIR_TOL:
            raise ValueError(f"triangle angles must sum to pi, got {total!r}")
        if total != PI:
            scale = PI / total
            object.__setattr__(self, "alpha", self.alpha * scale)
            object.__setattr__(self, "beta", self.beta * scale)
            object.__setattr__(self, "gamma", self.gamma * scale)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.alpha, self.beta, self.gamma)

    def sorted_desc(self) -> tuple[float, float, float]:
        """Angles in descending order (the similarity-class representative)."""
        a, b, g = sorted((self.alpha, self.beta, self.gamma), reverse=True)
        return (a, b, g)

    def is_degenerate(self, eps: float = DEGENERACY_EPS) -> bool:
        lo = min(self.alpha, self.beta, self.gamma)
        hi = max(self.alpha, self.beta, self.gamma)
        return lo <= eps or hi >= PI - eps

    def is_similar(self, other: "AngleTriple", tol: float = 1e-12) -> bool:
        """Same similarity class: sorted angles agree within ``tol``."""
        return all(
            abs(x - y) <= tol
            for x, y in zip(self.sorted_desc(), other.sorted_desc())
        )


EQUILATERAL = AngleTriple(THIRD_PI, THIRD_PI, THIRD_PI)


@dataclass(frozen=True, order=True)
class QualityValue:
    """Ratio of smallest to largest inner angle; 1 only for equilateral."""

    q: float

    def __float__(self) -> float:
        return self.q


@dataclass(frozen=True)
class CoefficientSequence:
    """Exact integers a_1..a_n with a_1 = a_2 = 1, a_n = a_{n-1} + 2 a_{n-2}.

    These drive the closed-form n-th power of the averaging map.  The
    index-0 extension a_0 = 0 makes the power formulas valid from n = 1.
    """

    values: tuple[int, ...]

    def a(self, k: int) -> int:
        if k < 0:
            raise IndexError("coefficient index must be >= 0")
        if k == 0:
            return 0
        return self.values[k - 1]

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class SpectralSummary:
    """Eigenvalues of the averaging matrix and the limit triple."""

    eigenvalues: tuple[float, float, float]
    limit_triple: AngleTriple


def averaging_matrix() -> np.ndarray:
    """Linear action on the angle vector: zero diagonal, 1/2 elsewhere."""
    return np.full((3, 3), 0.5) - 0.5 * np.eye(3)


def transform(t: AngleTriple, eps: float = DEGENERACY_EPS) -> AngleTriple:
    """Replace each angle by the mean of the other two.

    Preserves the angle sum and non-degeneracy; raises
    DegenerateTriangleError when the input is already degenerate.
    """
    if t.is_degenerate(eps):
        raise DegenerateTriangleError(f"degenerate input triple {t.as_tuple()}")
    a, b, g = t.alpha, t.beta, t.gamma
    return AngleTriple(0.5 * (b + g), 0.5 * (a + g), 0.5 * (a + b))


def iterate(t: AngleTriple, n: int, eps: float = DEGENERACY_EPS) -> AngleTriple:
    """Apply the transformation ``n`` times; n = 0 returns ``t`` unchanged."""
    if n < 0:
        raise ValueError("iteration count must be >= 0")
    for _ in range(n):
        t = transform(t, eps)
    return t


@lru_cache(maxsize=None)
def coefficients(n: int) -> CoefficientSequence:
    """Coefficients a_1..a_n of the closed-form power, by exact recurrence."""
    if n < 1:
        raise ValueError("coefficient count must be >= 1")
    vals = [1, 1]
    while len(vals) < n:
        vals.append(vals[-1] + 2 * vals[-2])
    return CoefficientSequence(tuple(vals[:n]))


def deviations_after(t: AngleTriple, n: int) -> tuple[float, float, float]:
    """Per-angle deviations from pi/3 after ``n`` steps, evaluated exactly.

    The map acts on each labeled deviation as multiplication by -1/2, and
    scaling a float by a power of two is lossless, so this path carries
    no rounding error beyond the initial subtraction.  It is the stable
    way to measure contraction rates once the angles are close to pi/3.
    """
    if n < 0:
        raise ValueError("iteration count must be >= 0")
    sign = -1.0 if n % 2 else 1.0
    return tuple(
        sign * math.ldexp(x - THIRD_PI, -n) for x in t.as_tuple()
    )


def iterate_closed_form(
    t: AngleTriple, n: int, cap: int = CLOSED_FORM_CAP
) -> AngleTriple:
    """Compute the n-th iterate directly, without looping over transform.

    Uses angle_n = ((2 a_{n-1} - a_n) * angle_0 + a_n * pi) / 2^n.  Above
    ``cap`` the a_n / 2^n ratio is a quotient of exponentially growing
    quantities, so evaluation switches to deviation form around pi/3.
    """
    if n < 1:
        raise ValueError("closed-form power requires n >= 1")
    if t.is_degenerate():
        raise DegenerateTriangleError(f"degenerate input triple {t.as_tuple()}")
    if n > cap:
        da, db, dg = deviations_after(t, n)
        return AngleTriple(THIRD_PI + da, THIRD_PI + db, THIRD_PI + dg)
    seq = coefficients(n)
    lead = 2 * seq.a(n - 1) - seq.a(n)
    tail = float(seq.a(n)) * PI
    scale = float(2**n)
    a, b, g = t.as_tuple()
    return AngleTriple(
        (lead * a + tail) / scale,
        (lead * b + tail) / scale,
        (lead * g + tail) / scale,
    )


def quality(t: AngleTriple) -> QualityValue:
    """Min/max inner-angle ratio; scale-free, 1 iff equilateral."""
    angles = t.as_tuple()
    return QualityValue(min(angles) / max(angles))


def predict_quality(
    t: AngleTriple, n: int, alt_even: bool = False
) -> QualityValue:
    """Quality after ``n`` steps, from a non-recursive closed form.

    With sorted initial angles a0 >= b0 >= g0 the ordering of the angles
    swaps every step and is restored every second step, so

        q_{2k}   = (pi + b * g0) / (pi + b * a0),  b = 3 / (4^k - 1), k >= 1
        q_{2k+1} = (pi - b * a0) / (pi - b * g0),  b = 6 / (4^(k+1) + 2)

    ``alt_even`` selects an alternative even-step form,
    (pi - b*a0) / (pi - b*g0), that mirrors the odd-step expression but
    disagrees with direct iteration (e.g. it yields 3/5 instead of 7/9
    at n = 2 for the 90-60-30 triangle); it is kept for comparison
    output only.

    Parameters
    ----------
    t : AngleTriple
        Initial angles.
    n : int
        Step count, >= 0.  For n = 0 the current quality is returned.
    alt_even : bool
        Use the alternative even-step expression (see above).
    """
    if n < 0:
        raise ValueError("step count must be >= 0")
    if n == 0:
        return quality(t)
    a0, _, g0 = t.sorted_desc()
    if n % 2:
        k = (n - 1) // 2
        b = 6.0 / (4.0 ** (k + 1) + 2.0)
        return QualityValue((PI - b * a0) / (PI - b * g0))
    k = n // 2
    b = 3.0 / (4.0**k - 1.0)
    if alt_even:
        return QualityValue((PI - b * a0) / (PI - b * g0))
    return QualityValue((PI + b * g0) / (PI + b * a0))


def convergence_rate_check(t: AngleTriple, k: int) -> float:
    """Two-step contraction ratio of the largest-angle deviation.

    Returns |a_{2k} - pi/3| / |a_{2k-2} - pi/3| along the track of the
    initially largest angle, evaluated in deviation form (exact under
    float halving), so the result is 1/4 for every non-equilateral
    input until the deviation underflows.
    """
    if k < 1:
        raise ValueError("rate check requires k >= 1")
    dev = max(t.as_tuple()) - THIRD_PI
    if dev <= 0.0:
        raise EquilateralTriangleError(
            "contraction ratio is 0/0 for the equilateral triple"
        )
    num = abs(math.ldexp(dev, -2 * k))
    den = abs(math.ldexp(dev, -2 * (k - 1)))
    if num < sys.float_info.min:
        raise ValueError(f"deviation underflows at k = {k}")
    return num / den


def spectral_summary() -> SpectralSummary:
    """Eigenvalues of the averaging matrix (ascending) and the limit triple."""
    eig = np.linalg.eigvalsh(averaging_matrix())
    return SpectralSummary(
        (float(eig[0]), float(eig[1]), float(eig[2])), EQUILATERAL
    )
