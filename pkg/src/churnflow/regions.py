"""Inequality regions for a candidate ``(q1, q3)`` against the status quo.

Every predicate is strict and evaluated on exact rationals: float inputs are
converted with ``Fraction(x)`` (no rounding), so a point on a boundary curve is
classified the same way no matter how close a float comparison would have
come to zero.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from churnflow import instance as inst
from churnflow.instance import AlphaModel, Treatment
from churnflow.numeric import Number, exact

QUARTER = Fraction(1, 4)


class Sign(enum.IntEnum):
    DOWN = -1
    NEUTRAL = 0
    UP = 1

    @classmethod
    def of(cls, value) -> "Sign":
        return cls((value > 0) - (value < 0))

    def __str__(self):
        return self.name.lower()


def _exact(model: AlphaModel, t: Treatment) -> tuple[Fraction, Fraction, Fraction]:
    return exact(model.alpha), exact(t.q1), exact(t.q3)


def arq_up_sides(model: AlphaModel, t: Treatment) -> tuple[Fraction, Fraction]:
    a, q1, q3 = _exact(model, t)
    return (12 * a + 3) * q3 + (3 - 4 * a) * q1, 8 * a + 3


def pop_down_sides(model: AlphaModel, t: Treatment) -> tuple[Fraction, Fraction]:
    a, q1, q3 = _exact(model, t)
    return (4 * a + 1) / (1 - q3) + (3 - 4 * a) / (1 - q1), Fraction(8) * (4 * a + 3) / 3


def churn_down_sides(model: AlphaModel, t: Treatment) -> tuple[Fraction, Fraction]:
    _, q1, q3 = _exact(model, t)
    return 6 * q3 + 2 * q1, Fraction(5)


def cond_arq_up(model: AlphaModel, t: Treatment) -> bool:
    lhs, rhs = arq_up_sides(model, t)
    return lhs > rhs


def cond_pop_down(model: AlphaModel, t: Treatment) -> bool:
    lhs, rhs = pop_down_sides(model, t)
    return lhs < rhs


def cond_churn_down(model: AlphaModel, t: Treatment) -> bool:
    lhs, rhs = churn_down_sides(model, t)
    return lhs > rhs


def lemma1_bounds(model: AlphaModel, t: Treatment) -> tuple[Fraction, Fraction]:
    """Lower and upper bound on ``q3`` for the ARQ-up / churn-up band."""
    a, q1, _ = _exact(model, t)
    return ((4 * a - 3) * q1 + 8 * a + 3) / (12 * a + 3), (5 - 2 * q1) / 6


def lemma1_region(model: AlphaModel, t: Treatment) -> bool:
    """Experiment shows higher ARQ *and* higher churn (conflicting signals)."""
    a, q1, q3 = _exact(model, t)
    lo, hi = lemma1_bounds(model, t)
    side = q1 < QUARTER < a or a < QUARTER < q1
    return lo < q3 < hi and side


def corollary1_region(model: AlphaModel, t: Treatment) -> bool:
    """Experiment shows higher ARQ and lower churn (an unequivocal win)."""
    a, q1, _ = _exact(model, t)
    churn = cond_churn_down(model, t)
    up = cond_arq_up(model, t)
    if a == QUARTER:
        return churn
    if a < QUARTER:
        return churn if q1 >= QUARTER else up
    return churn if q1 <= QUARTER else up


def prop2_conditions(model: AlphaModel, t: Treatment) -> bool:
    """Sufficient conditions for an experiment win with worse steady state."""
    if exact(model.alpha) > QUARTER:
        return cond_arq_up(model, t) and cond_pop_down(model, t)
    return cond_churn_down(model, t) and cond_pop_down(model, t)


@dataclass(frozen=True)
class RegionVerdict:
    exp_arq: Sign
    exp_churn: Sign
    ss_arq: Sign
    ss_pop: Sign
    deceptive: bool

    @property
    def label(self) -> str:
        signs = (self.exp_arq, self.exp_churn, self.ss_arq, self.ss_pop)
        if self.deceptive:
            return "DECEPTIVE"
        if all(s is Sign.NEUTRAL for s in signs):
            return "NEUTRAL"
        if self.exp_arq is not Sign.NEUTRAL and self.exp_arq == self.exp_churn:
            # ARQ and churn move the same way: one says better, the other worse
            return "MIXED"
        return "OTHER"


def classify(model: AlphaModel, t: Treatment) -> RegionVerdict:
    m = AlphaModel(exact(model.alpha))
    tx = Treatment(exact(t.q1), exact(t.q3))
    exp_arq = Sign.of(inst.experimental_arq(m, tx) - inst.arq_star(m))
    exp_churn = Sign.of(inst.experimental_churn(m, tx) - inst.churn_star(m))
    ss_arq = Sign.of(inst.treatment_steady_arq(m, tx) - inst.arq_star(m))
    ss_pop = Sign.of(inst.treatment_steady_population(m, tx) - inst.m_star(m))
    deceptive = exp_arq is Sign.UP and exp_churn is Sign.DOWN and ss_pop is Sign.DOWN
    return RegionVerdict(exp_arq, exp_churn, ss_arq, ss_pop, deceptive)


def elasticity(t: Treatment) -> Number:
    """Relative gain in ``q1`` per relative loss in ``q3``, measured from ``(1/4, 3/4)``.

    Raises ``ZeroDivisionError`` when ``q3 == 3/4``.
    """
    denom = 3 - 4 * t.q3
    if denom == 0:
        raise ZeroDivisionError("elasticity is undefined when q3 equals 3/4")
    return 3 * (4 * t.q1 - 1) / denom


@dataclass(frozen=True)
class Condition:
    name: str
    meaning: str
    lhs: Fraction
    relation: str
    rhs: Fraction
    holds: bool


def evidence(model: AlphaModel, t: Treatment) -> list[Condition]:
    """Each inequality behind the verdict, with both sides evaluated."""
    out = []
    lhs, rhs = arq_up_sides(model, t)
    out.append(Condition("arq-up", "experiment ARQ above status quo", lhs, ">", rhs, lhs > rhs))
    lhs, rhs = churn_down_sides(model, t)
    out.append(Condition("churn-down", "experiment churn below status quo", lhs, ">", rhs, lhs > rhs))
    lhs, rhs = pop_down_sides(model, t)
    out.append(Condition("population-down", "steady population below status quo", lhs, "<", rhs, lhs < rhs))
    lo, hi = lemma1_bounds(model, t)
    q3 = exact(t.q3)
    out.append(Condition("mixed-band-lower", "q3 above lower bound of ARQ-up/churn-up band", q3, ">", lo, q3 > lo))
    out.append(Condition("mixed-band-upper", "q3 below upper bound of ARQ-up/churn-up band", q3, "<", hi, q3 < hi))
    return out


def lattice(denominator: int = 48) -> Iterator[tuple[Fraction, Fraction, Fraction]]:
    """All ``(alpha, q1, q3)`` with components ``k/denominator`` in the open domains.

    With the default denominator the lattice hits ``alpha in {1/6, 1/4, 1/3}``
    and ``q in {1/4, 3/4}`` exactly, so boundary cases are exercised.
    """
    d = denominator
    for ka in range(1, (d + 1) // 2):
        a = Fraction(ka, d)
        for k1 in range(1, d):
            for k3 in range(1, d):
                yield a, Fraction(k1, d), Fraction(k3, d)


def halton_points(
    n: int, seed: int = 20240101, alpha_range=(0.02, 0.48), q_range=(0.02, 0.98)
) -> list[tuple[Fraction, Fraction, Fraction]]:
    """Scrambled Halton sample of ``(alpha, q1, q3)`` as exact rationals."""
    from scipy.stats import qmc

    u = qmc.Halton(d=3, scramble=True, seed=seed).random(n)
    lo = [alpha_range[0], q_range[0], q_range[0]]
    hi = [alpha_range[1], q_range[1], q_range[1]]
    pts = qmc.scale(u, lo, hi)
    return [tuple(Fraction(float(v)) for v in row) for row in pts]


def grid_axis(n: int) -> list[Fraction]:
    """``n`` evenly spaced interior points of (0, 1): ``(i + 1) / (n + 1)``."""
    return [Fraction(i + 1, n + 1) for i in range(n)]


def sweep(model: AlphaModel, n: int) -> list[tuple[Fraction, Fraction, RegionVerdict]]:
    if n < 1:
        raise ValueError("grid size must be at least 1")
    axis = grid_axis(n)
    return [(q1, q3, classify(model, Treatment(q1, q3))) for q1 in axis for q3 in axis]
