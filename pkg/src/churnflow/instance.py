"""The two-segment, two-health-level model and its closed forms.

Observable segments are ``x in {1/4, 3/4}`` and health levels ``e in {1/4, 3/4}``.
Inflow puts mass ``alpha`` on the two diagonal types and ``1/2 - alpha`` on the
off-diagonal ones, so ``alpha > 1/4`` means segment and health are positively
correlated. The incumbent ("status quo") algorithm serves ``q*(x) = x``.

The closed forms below are written out directly and share no code with
:mod:`churnflow.dynamics`; the test suite uses each as an oracle for the other.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from churnflow.dynamics import QualityProfile, TypeSpace
from churnflow.numeric import DomainError, Number, check_open_unit

HIGH = Fraction(3, 4)
LOW = Fraction(1, 4)


@dataclass(frozen=True)
class AlphaModel:
    alpha: Number

    def __post_init__(self):
        if not 0 < self.alpha < Fraction(1, 2):
            raise DomainError(f"alpha must lie in (0, 1/2), got {self.alpha}")

    def inflow(self) -> dict[tuple[Fraction, Fraction], Number]:
        a = self.alpha
        half = Fraction(1, 2) if isinstance(a, Fraction) else 0.5
        return {
            (HIGH, HIGH): a,
            (HIGH, LOW): half - a,
            (LOW, HIGH): half - a,
            (LOW, LOW): a,
        }


@dataclass(frozen=True)
class Treatment:
    """Candidate quality pair: ``q1`` for the low segment, ``q3`` for the high one."""

    q1: Number
    q3: Number

    def __post_init__(self):
        check_open_unit("q1", self.q1)
        check_open_unit("q3", self.q3)

    def profile(self) -> QualityProfile:
        return QualityProfile({HIGH: self.q3, LOW: self.q1})


STATUS_QUO = Treatment(LOW, HIGH)


def type_space(model: AlphaModel) -> TypeSpace:
    return TypeSpace.from_pairs(model.inflow().items())


def status_quo(model: AlphaModel) -> tuple[TypeSpace, QualityProfile]:
    return type_space(model), STATUS_QUO.profile()


def status_quo_masses(model: AlphaModel) -> dict[tuple[Fraction, Fraction], Number]:
    a = model.alpha
    return {
        (HIGH, HIGH): 16 * a,
        (HIGH, LOW): 8 * (1 - 2 * a) / 3,
        (LOW, HIGH): 8 * (1 - 2 * a) / 3,
        (LOW, LOW): 16 * a / 9,
    }


def m_star(model: AlphaModel) -> Number:
    return 16 * (4 * model.alpha + 3) / 9


def arq_star(model: AlphaModel) -> Number:
    a = model.alpha
    return (8 * a + 3) / (8 * a + 6)


def churn_star(model: AlphaModel) -> Number:
    return 1 / m_star(model)


def experimental_arq(model: AlphaModel, t: Treatment) -> Number:
    """ARQ seen in a one-period experiment on the status-quo steady population."""
    a = model.alpha
    return ((12 * a + 3) * t.q3 + (3 - 4 * a) * t.q1) / (8 * a + 6)


def experimental_churn(model: AlphaModel, t: Treatment) -> Number:
    """Churn rate seen in a one-period experiment on the status-quo steady population."""
    return 2 / m_star(model) * ((1 - t.q3) + (1 - t.q1) / 3)


def _segment_steady_masses(model: AlphaModel, t: Treatment) -> tuple[Number, Number]:
    a = model.alpha
    high = 2 * (4 * a + 1) / (3 * (1 - t.q3))
    low = 2 * (3 - 4 * a) / (3 * (1 - t.q1))
    return high, low


def treatment_steady_population(model: AlphaModel, t: Treatment) -> Number:
    high, low = _segment_steady_masses(model, t)
    return high + low


def treatment_steady_arq(model: AlphaModel, t: Treatment) -> Number:
    high, low = _segment_steady_masses(model, t)
    return (t.q3 * high + t.q1 * low) / (high + low)
