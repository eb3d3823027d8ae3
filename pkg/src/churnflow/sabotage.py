"""Chains of treatments that each pass a one-period experiment but shrink the user base.

Works at ``alpha = 1/4`` from an arbitrary incumbent ``(q1*, q3*)`` with
``q1* != q3*``. Under that inflow each segment's steady mass is
``4 / (3 (1 - q*_x))`` and a one-period experiment on it sees

    ARQ   = sum_x q_x w_x / sum_x w_x,               w_x = 4 / (3 (1 - q*_x))
    churn = sum_x (1 - q_x) / (1 - q*_x) / (2 sum_x w_x)

The constructed successor lowers churn and raises ARQ under these metrics
while strictly lowering ``sum_x 1 / (1 - q_x)``, i.e. the steady population.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from churnflow.instance import Treatment
from churnflow.numeric import Number

log = logging.getLogger(__name__)

DIAGONAL_TOL = 1e-9


class DegenerateStatusQuoError(ValueError):
    """The incumbent serves both segments equally; no successor can be built."""


def steady_population(t: Treatment) -> Number:
    return 4 / (3 * (1 - t.q3)) + 4 / (3 * (1 - t.q1))


def experimental_arq(frm: Treatment, to: Treatment) -> Number:
    w3 = 4 / (3 * (1 - frm.q3))
    w1 = 4 / (3 * (1 - frm.q1))
    return (to.q3 * w3 + to.q1 * w1) / (w3 + w1)


def experimental_churn(frm: Treatment, to: Treatment) -> Number:
    ratio = (1 - to.q3) / (1 - frm.q3) + (1 - to.q1) / (1 - frm.q1)
    return ratio / (2 * steady_population(frm))


def churn_condition(frm: Treatment, to: Treatment) -> Number:
    """``(1-q3)/(1-q3*) + (1-q1)/(1-q1*) - 2``; negative when experiment churn falls."""
    return (1 - to.q3) / (1 - frm.q3) + (1 - to.q1) / (1 - frm.q1) - 2


def population_condition(frm: Treatment, to: Treatment) -> Number:
    """``sum 1/(1-q) - sum 1/(1-q*)``; negative when the steady population falls."""
    return 1 / (1 - to.q3) + 1 / (1 - to.q1) - 1 / (1 - frm.q3) - 1 / (1 - frm.q1)


def next_treatment(frm: Treatment) -> Treatment:
    p, r = frm.q1, frm.q3
    if p == r:
        raise DegenerateStatusQuoError(
            f"incumbent quality is equal across segments (q1 = q3 = {p})"
        )
    s = 2 - p - r
    q1 = (3 * p + r - p * p - 3 * p * r) / (2 * s)
    q3 = (
        5 * p * p * r + 10 * p * r * r + r**3 - p * p - 22 * p * r - 9 * r * r + 4 * p + 12 * r
    ) / (4 * s * s)
    return Treatment(q1, q3)


@dataclass(frozen=True)
class SabotageStep:
    frm: Treatment
    to: Treatment
    exp_arq_before: Number
    exp_arq_after: Number
    exp_churn_before: Number
    exp_churn_after: Number
    steady_before: Number
    steady_after: Number

    @classmethod
    def between(cls, frm: Treatment, to: Treatment) -> "SabotageStep":
        return cls(
            frm=frm,
            to=to,
            exp_arq_before=experimental_arq(frm, frm),
            exp_arq_after=experimental_arq(frm, to),
            exp_churn_before=experimental_churn(frm, frm),
            exp_churn_after=experimental_churn(frm, to),
            steady_before=steady_population(frm),
            steady_after=steady_population(to),
        )


def sabotage_sequence(start: Treatment, n: int) -> list[SabotageStep]:
    """Chain ``n`` successors from ``start``.

    Stops early (with a log warning) once the pair is within ``DIAGONAL_TOL``
    of the diagonal, where the construction degenerates; in exact arithmetic
    this never happens because each step keeps ``q1 != q3``.
    """
    if n < 1:
        raise ValueError("number of steps must be at least 1")
    steps: list[SabotageStep] = []
    cur = start
    for i in range(n):
        nxt = next_treatment(cur)
        steps.append(SabotageStep.between(cur, nxt))
        cur = nxt
        if i + 1 < n and abs(cur.q1 - cur.q3) < DIAGONAL_TOL:
            log.warning("sequence stopped after %d steps: segments within %g", i + 1, DIAGONAL_TOL)
            break
    return steps
