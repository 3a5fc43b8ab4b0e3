"""Exact Ehrhart quasi-polynomial fitting and the invariants derived from it.

A polygon's count ``L(n) = #(nP ∩ Z^2)`` agrees, on each residue class of
``n`` modulo the vertex denominator ``D``, with a polynomial of degree two.
We recover the three coefficient tables by exact interpolation over the
rationals and then check them against a fresh band of counts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .geometry import (
    RationalPolygon,
    as_rational,
    area,
    dilate,
    integral_hull,
)
from .lattice import boundary_interior, count_lattice_points


class FitVerificationFailure(RuntimeError):
    """Interpolated coefficients disagree with a freshly counted value."""


@dataclass(frozen=True)
class QuasiPolynomial:
    """``L(n) = sum_k coeffs[k][n mod period] * n**k``.

    ``coeffs[k]`` has one entry per residue; residue 0 means ``n ≡ 0 (mod D)``.
    """

    period: int
    coeffs: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if self.period < 1:
            raise ValueError("period must be positive")
        tables = tuple(tuple(as_rational(c) for c in t) for t in self.coeffs)
        if not tables:
            raise ValueError("at least one coefficient table is required")
        if any(len(t) != self.period for t in tables):
            raise ValueError("every coefficient table needs one entry per residue")
        object.__setattr__(self, "coeffs", tables)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, k: int) -> tuple[Fraction, ...]:
        if k < len(self.coeffs):
            return self.coeffs[k]
        return (Fraction(0),) * self.period

    @property
    def c0(self) -> tuple[Fraction, ...]:
        return self.coefficient(0)

    @property
    def c1(self) -> tuple[Fraction, ...]:
        return self.coefficient(1)

    @property
    def c2(self) -> tuple[Fraction, ...]:
        return self.coefficient(2)

    def evaluate(self, n: int) -> Fraction:
        rho = n % self.period
        return sum((t[rho] * n**k for k, t in enumerate(self.coeffs)), Fraction(0))

    __call__ = evaluate

    def to_json(self) -> dict:
        out: dict = {"period": self.period}
        for k in range(max(3, len(self.coeffs))):
            out[f"c{k}"] = [str(c) for c in self.coefficient(k)]
        return out

    @classmethod
    def from_json(cls, data: dict) -> QuasiPolynomial:
        period = int(data["period"])
        tables = []
        k = 0
        while f"c{k}" in data:
            tables.append(tuple(as_rational(str(c)) for c in data[f"c{k}"]))
            k += 1
        return cls(period, tuple(tables))


def _interpolate(xs: Sequence[int], ys: Sequence[int]) -> list[Fraction]:
    """Monomial coefficients of the polynomial through the points (Newton form)."""
    m = len(xs)
    table = [Fraction(y) for y in ys]
    newton = [table[0]]
    for level in range(1, m):
        table = [
            (table[i + 1] - table[i]) / (xs[i + level] - xs[i]) for i in range(m - level)
        ]
        newton.append(table[0])
    # Horner expansion of sum_k newton[k] * prod_{i<k} (n - xs[i]).
    coeffs = [Fraction(0)] * m
    for k in range(m - 1, -1, -1):
        shifted = [Fraction(0)] + coeffs[:-1]
        coeffs = [shifted[i] - xs[k] * coeffs[i] for i in range(m)]
        coeffs[0] += newton[k]
    return coeffs


def fit_quasi_polynomial(
    counter: Callable[[int], int],
    period: int,
    degree: int = 2,
    verify_through: int | None = None,
) -> QuasiPolynomial:
    """Interpolate ``counter`` on each residue class and verify the result.

    Residue ``rho`` is sampled at ``rho', rho'+D, ..., rho'+degree*D`` with
    ``rho' = rho`` (or ``D`` when ``rho = 0``).  Predictions are then checked
    against ``counter`` for every ``n`` in ``((degree+1)D, verify_through]``,
    which defaults to ``(degree+2)D``.
    """
    D = period
    tables: list[list[Fraction]] = [[Fraction(0)] * D for _ in range(degree + 1)]
    for rho in range(D):
        start = rho if rho else D
        xs = [start + k * D for k in range(degree + 1)]
        coeffs = _interpolate(xs, [counter(x) for x in xs])
        for k in range(degree + 1):
            tables[k][rho] = coeffs[k]
    qp = QuasiPolynomial(D, tuple(tuple(t) for t in tables))
    hi = (degree + 2) * D if verify_through is None else verify_through
    for n in range((degree + 1) * D + 1, hi + 1):
        got = counter(n)
        if qp.evaluate(n) != got:
            raise FitVerificationFailure(
                f"prediction {qp.evaluate(n)} != count {got} at n={n}"
            )
    return qp


def ehrhart_qp(P: RationalPolygon) -> QuasiPolynomial:
    """Fitted Ehrhart quasi-polynomial of ``P`` with period ``lcm`` of denominators."""
    qp = fit_quasi_polynomial(lambda n: count_lattice_points(P, n), P.denominator)
    A = area(P)
    if any(c != A for c in qp.c2):
        raise FitVerificationFailure(f"leading coefficients {qp.c2} differ from area {A}")
    return qp


@dataclass(frozen=True)
class PeriodSequence:
    s0: int
    s1: int
    s2: int

    @property
    def quasi_period(self) -> int:
        return math.lcm(self.s0, self.s1, self.s2)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.s0, self.s1, self.s2)


@dataclass(frozen=True)
class IndexSequence:
    j0: int
    j1: int
    j2: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.j0, self.j1, self.j2)


def minimal_period(table: Sequence[Fraction]) -> int:
    D = len(table)
    for s in range(1, D + 1):
        if D % s == 0 and all(table[i] == table[(i + s) % D] for i in range(D)):
            return s
    return D


def period_sequence(qp: QuasiPolynomial) -> PeriodSequence:
    return PeriodSequence(*(minimal_period(qp.coefficient(k)) for k in range(3)))


def _primitive_normal(u, v) -> tuple[int, int]:
    w = v - u
    L = w.denominator
    a, b = int(w.x * L), int(w.y * L)
    g = math.gcd(a, b)
    return -b // g, a // g


def index_sequence(P: RationalPolygon) -> IndexSequence:
    """Smallest dilations making every vertex, and every edge's line, hit the lattice."""
    j0 = P.denominator
    j1 = 1
    for u, v in P.edges():
        nx, ny = _primitive_normal(u, v)
        j1 = math.lcm(j1, (nx * u.x + ny * u.y).denominator)
    return IndexSequence(j0, j1, 1)


@dataclass(frozen=True)
class PipReport:
    is_pip: bool
    pick_defect: Fraction
    boundary_scaling_ok: bool
    interior: int
    boundary: int
    periods: PeriodSequence


def pip_report(P: RationalPolygon) -> PipReport:
    """Quasi-period-one test together with Pick's formula and boundary scaling."""
    qp = ehrhart_qp(P)
    periods = period_sequence(qp)
    counts = boundary_interior(P)
    defect = area(P) - (counts.interior + Fraction(counts.boundary, 2) - 1)
    scaling = all(
        boundary_interior(dilate(P, n)).boundary == n * counts.boundary
        for n in range(1, 2 * qp.period + 1)
    )
    return PipReport(
        is_pip=periods.quasi_period == 1,
        pick_defect=defect,
        boundary_scaling_ok=scaling,
        interior=counts.interior,
        boundary=counts.boundary,
        periods=periods,
    )


def scott_admissible(I: int, b: int, allow_pip_extension: bool = False) -> bool:
    """Whether some lattice polygon (or polygonal PIP) has I interior and b boundary points."""
    if I < 0 or b < 0:
        return False
    if b >= 3 and (I == 0 or (I, b) == (1, 9) or b <= 2 * I + 6):
        return True
    return allow_pip_extension and b in (1, 2) and I >= 1


@dataclass(frozen=True)
class ClosedForms:
    segment_qp: QuasiPolynomial
    rectangle_qp: QuasiPolynomial


def closed_forms(s: int, m: int) -> ClosedForms:
    """Quasi-polynomials of the segment ``[0, 1/s]`` and the rectangle ``[0,1/s] x [0,m]``."""
    if s < 1 or m < 1:
        raise ValueError("s and m must be positive")
    # floor(n/s) - n/s + 1 depends only on n mod s: it equals 1 - rho/s.
    seg_c0 = tuple(1 - Fraction(rho, s) for rho in range(s))
    seg_c1 = tuple(Fraction(1, s) for _ in range(s))
    segment = QuasiPolynomial(s, (seg_c0, seg_c1))
    rect = QuasiPolynomial(
        s,
        (
            seg_c0,
            tuple(m * c + Fraction(1, s) for c in seg_c0),
            tuple(Fraction(m, s) for _ in range(s)),
        ),
    )
    return ClosedForms(segment, rect)


@dataclass(frozen=True)
class McMullenReport:
    periods: PeriodSequence
    indices: IndexSequence

    @property
    def holds(self) -> bool:
        return all(j % s == 0 for s, j in zip(self.periods.as_tuple(), self.indices.as_tuple()))


def mcmullen_report(P: RationalPolygon) -> McMullenReport:
    return McMullenReport(period_sequence(ehrhart_qp(P)), index_sequence(P))


def mcmullen_check(P: RationalPolygon) -> bool:
    """True iff each period ``s_i`` divides the matching index ``j_i``."""
    return mcmullen_report(P).holds


def integral_hull_proposition_check(P: RationalPolygon) -> bool:
    """Scott's bound for ``P`` whenever its integral hull has an interior lattice point."""
    hull = integral_hull(P)
    if not isinstance(hull, RationalPolygon):
        return True
    if boundary_interior(hull).interior < 1:
        return True
    counts = boundary_interior(P)
    I, b = counts.interior, counts.boundary
    return (I, b) == (1, 9) or b <= 2 * I + 6

