"""Finite-type inflow/churn population engine.

Each period a unit mass of new users arrives, split across user types by the
inflow table. At the end of the period every present user of type ``(x, e)``
churns with probability ``(1 - q(x)) * (1 - e)``. Populations are measured
after inflow and before churn, so

    P_{t+1}(x, e) = P_t(x, e) * (1 - hazard(q(x), e)) + F(x, e).

The recurrence is affine and contracting per type, which gives a unique
steady state ``F / hazard`` and geometric convergence toward it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from churnflow.numeric import DomainError, Number, check_open_unit

FLOAT_INFLOW_TOL = 1e-12


class MismatchError(ValueError):
    """A population state was paired with a type space it was not built on."""


class ZeroMassError(ValueError):
    """A metric was requested for an empty population."""


@dataclass(frozen=True)
class UserType:
    x: Number
    e: Number

    def __post_init__(self):
        check_open_unit("x", self.x)
        check_open_unit("e", self.e)


@dataclass(frozen=True)
class TypeSpace:
    types: tuple[UserType, ...]
    inflow: tuple[Number, ...]

    def __post_init__(self):
        object.__setattr__(self, "types", tuple(self.types))
        object.__setattr__(self, "inflow", tuple(self.inflow))
        if not self.types:
            raise DomainError("a type space needs at least one user type")
        if len(set(self.types)) != len(self.types):
            raise DomainError("user types must be distinct")
        if len(self.inflow) != len(self.types):
            raise DomainError("inflow table must have one entry per user type")
        if any(f < 0 for f in self.inflow):
            raise DomainError("inflow masses must be nonnegative")
        total = sum(self.inflow)
        if isinstance(total, Fraction):
            ok = total == 1
        else:
            ok = abs(total - 1) <= FLOAT_INFLOW_TOL
        if not ok:
            raise DomainError(f"inflow must sum to 1, got {total}")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[tuple[Number, Number], Number]]) -> "TypeSpace":
        """Build from ``[((x, e), inflow), ...]``."""
        pairs = list(pairs)
        return cls(
            types=tuple(UserType(x, e) for (x, e), _ in pairs),
            inflow=tuple(f for _, f in pairs),
        )

    def segments(self) -> list[Number]:
        """Distinct observable feature values, in first-seen order."""
        seen: list[Number] = []
        for t in self.types:
            if t.x not in seen:
                seen.append(t.x)
        return seen

    def __len__(self):
        return len(self.types)


@dataclass(frozen=True)
class QualityProfile:
    """Recommendation quality per observable segment, ``x -> q(x)``."""

    quality: Mapping[Number, Number]

    def __post_init__(self):
        object.__setattr__(self, "quality", dict(self.quality))
        for x, q in self.quality.items():
            check_open_unit(f"q({x})", q)

    def __getitem__(self, x: Number) -> Number:
        try:
            return self.quality[x]
        except KeyError:
            raise DomainError(f"quality profile has no entry for x={x}") from None

    def check_covers(self, space: TypeSpace) -> None:
        missing = [x for x in space.segments() if x not in self.quality]
        if missing:
            raise DomainError(f"quality profile is missing segments {missing}")

    def values(self) -> list[Number]:
        return list(self.quality.values())


@dataclass(frozen=True)
class PopulationState:
    period: int
    mass: tuple[Number, ...]
    types: tuple[UserType, ...] = field(repr=False)

    @property
    def total_mass(self) -> Number:
        return sum(self.mass)

    def segment_mass(self, x: Number) -> Number:
        return sum(m for m, t in zip(self.mass, self.types) if t.x == x)


@dataclass(frozen=True)
class MetricReport:
    period: int
    arq: Number
    churn_rate: Number
    total_mass: Number


@dataclass(frozen=True)
class Snapshot:
    """One trajectory element: the population present in a period and its metrics."""

    state: PopulationState
    metrics: MetricReport


def hazard(q: Number, e: Number) -> Number:
    """Per-period churn probability of a user with health ``e`` facing quality ``q``."""
    check_open_unit("q", q)
    check_open_unit("e", e)
    return (1 - q) * (1 - e)


def _check_matches(pop: PopulationState, space: TypeSpace) -> None:
    if pop.types != space.types or len(pop.mass) != len(space.types):
        raise MismatchError("population state is not indexed against this type space")


def steady_state(space: TypeSpace, q: QualityProfile) -> PopulationState:
    q.check_covers(space)
    mass = tuple(f / hazard(q[t.x], t.e) for t, f in zip(space.types, space.inflow))
    return PopulationState(period=0, mass=mass, types=space.types)


def step(pop: PopulationState, space: TypeSpace, q: QualityProfile) -> PopulationState:
    """Apply one end-of-period churn under ``q`` followed by the next inflow."""
    _check_matches(pop, space)
    q.check_covers(space)
    mass = tuple(
        m * (1 - hazard(q[t.x], t.e)) + f
        for m, t, f in zip(pop.mass, space.types, space.inflow)
    )
    return PopulationState(period=pop.period + 1, mass=mass, types=space.types)


def arq(pop: PopulationState, q: QualityProfile) -> Number:
    """Population-weighted average recommendation quality."""
    total = pop.total_mass
    if total <= 0:
        raise ZeroMassError("ARQ is undefined for a population with no mass")
    return sum(q[t.x] * m for m, t in zip(pop.mass, pop.types)) / total


def churn_rate(pop: PopulationState, q: QualityProfile) -> Number:
    """Mass-weighted mean hazard: the fraction of present users lost this period."""
    total = pop.total_mass
    if total <= 0:
        raise ZeroMassError("churn rate is undefined for a population with no mass")
    return sum(m * hazard(q[t.x], t.e) for m, t in zip(pop.mass, pop.types)) / total


def metrics(pop: PopulationState, q: QualityProfile) -> MetricReport:
    return MetricReport(
        period=pop.period,
        arq=arq(pop, q),
        churn_rate=churn_rate(pop, q),
        total_mass=pop.total_mass,
    )


def simulate(
    pop0: PopulationState, space: TypeSpace, q: QualityProfile, horizon: int
) -> list[Snapshot]:
    """Run ``horizon`` periods under ``q``; element ``t`` is ``pop0`` stepped ``t`` times.

    Element 0 is the population at the moment ``q`` is switched on, so its
    metrics are what a one-period experiment on the undisturbed population sees.
    """
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    _check_matches(pop0, space)
    pop = PopulationState(period=0, mass=pop0.mass, types=pop0.types)
    out = [Snapshot(pop, metrics(pop, q))]
    for _ in range(horizon):
        pop = step(pop, space, q)
        out.append(Snapshot(pop, metrics(pop, q)))
    return out


def first_period_below(
    pop0: PopulationState,
    space: TypeSpace,
    q: QualityProfile,
    baseline: Number,
    max_horizon: int,
) -> Optional[int]:
    """Smallest ``t >= 1`` whose total mass is strictly below ``baseline``.

    Returns ``None`` when the total stays at or above ``baseline`` through
    ``max_horizon`` periods.
    """
    if max_horizon < 1:
        raise ValueError("max_horizon must be at least 1")
    _check_matches(pop0, space)
    pop = pop0
    for t in range(1, max_horizon + 1):
        pop = step(pop, space, q)
        if pop.total_mass < baseline:
            return t
    return None


def convergence_time(
    pop0: PopulationState, space: TypeSpace, q: QualityProfile, rel_tol: float
) -> int:
    """Periods until every type's mass is within ``rel_tol`` (relative) of steady state.

    Each type's error shrinks by its retention factor ``1 - hazard`` per
    period, so the answer is the maximum over types of the per-type count.
    """
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    _check_matches(pop0, space)
    target = steady_state(space, q)

    def converged(pop: PopulationState) -> bool:
        return all(abs(m - s) <= rel_tol * s for m, s in zip(pop.mass, target.mass))

    pop = pop0
    t = 0
    while not converged(pop):
        pop = step(pop, space, q)
        t += 1
    return t
