from fractions import Fraction

import pytest
from hypothesis import strategies as st

from churnflow import dynamics as dyn
from churnflow import instance as inst
from churnflow import regions
from churnflow.instance import AlphaModel, Treatment

F = Fraction
QUARTER = F(1, 4)
PAPER_TREATMENT = Treatment(F(7, 16), F(45, 64))


@pytest.fixture
def paper_model():
    return AlphaModel(QUARTER)


@pytest.fixture
def paper_setup(paper_model):
    space, sq = inst.status_quo(paper_model)
    return space, sq, dyn.steady_state(space, sq)


def open_unit_fractions(max_denominator=97):
    return st.fractions(
        min_value=F(1, max_denominator), max_value=1 - F(1, max_denominator),
        max_denominator=max_denominator,
    ).filter(lambda v: 0 < v < 1)


@st.composite
def type_spaces(draw, max_types=5):
    """Random finite type space with rational inflow summing to one."""
    n = draw(st.integers(1, max_types))
    pairs = draw(
        st.lists(
            st.tuples(open_unit_fractions(16), open_unit_fractions(16)),
            min_size=n, max_size=n, unique=True,
        )
    )
    weights = draw(st.lists(st.integers(1, 20), min_size=n, max_size=n))
    total = sum(weights)
    return dyn.TypeSpace(
        tuple(dyn.UserType(x, e) for x, e in pairs), tuple(F(w, total) for w in weights)
    )


@st.composite
def spaces_with_profile(draw):
    space = draw(type_spaces())
    profile = {x: draw(open_unit_fractions(64)) for x in space.segments()}
    return space, dyn.QualityProfile(profile)


@pytest.fixture(scope="session")
def sample_points():
    """Deterministic sample of (alpha, q1, q3): an exact lattice plus a Halton set."""
    return list(regions.lattice(48)) + regions.halton_points(10_000, seed=20240101)


@pytest.fixture(scope="session")
def classified(sample_points):
    out = []
    for a, q1, q3 in sample_points:
        m, t = AlphaModel(a), Treatment(q1, q3)
        out.append((m, t, regions.classify(m, t)))
    return out


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
