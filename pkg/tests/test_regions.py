from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from churnflow import dynamics as dyn
from churnflow import instance as inst
from churnflow import regions
from churnflow.instance import STATUS_QUO, AlphaModel, Treatment
from churnflow.regions import Sign

from conftest import PAPER_TREATMENT, QUARTER, open_unit_fractions

alphas = st.fractions(min_value=F(1, 100), max_value=F(49, 100), max_denominator=100)
SIXTH = AlphaModel(F(1, 6))


@given(alphas)
def test_status_quo_is_on_every_boundary(alpha):
    m = AlphaModel(alpha)
    assert not regions.cond_arq_up(m, STATUS_QUO)
    assert not regions.cond_pop_down(m, STATUS_QUO)
    assert not regions.cond_churn_down(m, STATUS_QUO)
    assert not regions.corollary1_region(m, STATUS_QUO)
    v = regions.classify(m, STATUS_QUO)
    assert (v.exp_arq, v.exp_churn, v.ss_arq, v.ss_pop) == (Sign.NEUTRAL,) * 4
    assert not v.deceptive


def test_paper_treatment_conditions(paper_model):
    assert regions.cond_arq_up(paper_model, PAPER_TREATMENT)
    assert regions.cond_churn_down(paper_model, PAPER_TREATMENT)
    lhs, rhs = regions.pop_down_sides(paper_model, PAPER_TREATMENT)
    assert lhs == F(128, 19) + F(32, 9) and rhs == F(32, 3)
    assert regions.cond_pop_down(paper_model, PAPER_TREATMENT)
    assert regions.churn_down_sides(paper_model, PAPER_TREATMENT)[0] == F("5.09375")


def test_arq_up_alpha_one_sixth():
    assert not regions.cond_arq_up(SIXTH, Treatment(F(1, 2), F("0.60")))


def test_churn_down_examples(paper_model):
    assert not regions.cond_churn_down(paper_model, Treatment(F(1, 2), F("0.65")))


def test_lemma1_region_examples(paper_model):
    t = Treatment(F(1, 2), F("0.65"))
    assert regions.lemma1_bounds(SIXTH, t) == (F(19, 30), F(2, 3))
    assert regions.lemma1_region(SIXTH, t)
    assert not regions.lemma1_region(SIXTH, Treatment(F(1, 2), F("0.70")))


@given(open_unit_fractions(), open_unit_fractions())
def test_lemma1_empty_at_quarter(q1, q3):
    assert not regions.lemma1_region(AlphaModel(QUARTER), Treatment(q1, q3))


def test_corollary1_examples(paper_model):
    assert regions.corollary1_region(paper_model, PAPER_TREATMENT)
    assert regions.corollary1_region(SIXTH, Treatment(F(1, 2), F("0.70")))


def test_classify_examples(paper_model):
    v = regions.classify(paper_model, PAPER_TREATMENT)
    assert (v.exp_arq, v.exp_churn, v.ss_arq, v.ss_pop) == (Sign.UP, Sign.DOWN, Sign.DOWN, Sign.DOWN)
    assert v.deceptive and v.label == "DECEPTIVE"
    v = regions.classify(SIXTH, Treatment(F(1, 2), F("0.65")))
    assert (v.exp_arq, v.exp_churn) == (Sign.UP, Sign.UP)
    assert not v.deceptive and v.label == "MIXED"


def test_classify_float_inputs_match_exact(paper_model):
    assert regions.classify(AlphaModel(0.25), Treatment(0.4375, 0.703125)) == regions.classify(
        paper_model, PAPER_TREATMENT
    )


def test_elasticity_examples():
    # -(dq1/q1*)/(dq3/q3*) = -(3/4)/(-1/16)
    assert regions.elasticity(PAPER_TREATMENT) == 12
    assert regions.elasticity(Treatment(QUARTER, F(2, 3))) == 0
    with pytest.raises(ZeroDivisionError):
        regions.elasticity(Treatment(F(1, 2), F(3, 4)))


def elasticity_from_definition(t):
    q1s, q3s = F(1, 4), F(3, 4)
    return -((t.q1 - q1s) / q1s) / ((t.q3 - q3s) / q3s)


@given(open_unit_fractions())
def test_elasticity_on_churn_neutral_line(q1):
    q3 = (5 - 2 * q1) / 6
    if not 0 < q3 < 1 or q3 == F(3, 4):
        return
    t = Treatment(q1, q3)
    assert regions.elasticity(t) == 9
    assert elasticity_from_definition(t) == 9


@given(open_unit_fractions(), open_unit_fractions())
def test_elasticity_matches_definition(q1, q3):
    if q3 == F(3, 4):
        return
    t = Treatment(q1, q3)
    assert regions.elasticity(t) == elasticity_from_definition(t)


def test_sweep_grid_of_one(paper_model):
    rows = regions.sweep(paper_model, 1)
    assert len(rows) == 1 and rows[0][:2] == (F(1, 2), F(1, 2))


def test_sweep_churn_boundary_tracks_line(paper_model):
    n = 200
    rows = regions.sweep(paper_model, n)
    axis = regions.grid_axis(n)
    step = axis[1] - axis[0]
    by_q1 = {}
    for q1, q3, v in rows:
        by_q1.setdefault(q1, []).append((q3, v.exp_churn))
    for q1, col in by_q1.items():
        flips = [q3 for (q3, s), (_, s_prev) in zip(col[1:], col) if s != s_prev]
        line = (5 - 2 * q1) / 6
        for q3 in flips:
            assert abs(q3 - line) <= step


def test_sweep_alpha_one_sixth_has_deceptive_points():
    rows = regions.sweep(SIXTH, 60)
    assert any(v.deceptive for _, _, v in rows)


def test_verdict_matches_long_simulation():
    model = AlphaModel(F(1, 4))
    space, sq = inst.status_quo(model)
    fspace = dyn.TypeSpace(space.types, tuple(float(f) for f in space.inflow))
    pop0 = dyn.steady_state(fspace, sq)
    for q1, q3 in [(0.4375, 0.703125), (0.3, 0.8), (0.6, 0.6), (0.2, 0.9), (0.55, 0.5)]:
        t = Treatment(q1, q3)
        v = regions.classify(model, t)
        traj = dyn.simulate(pop0, fspace, t.profile(), 2000)
        diff = traj[-1].metrics.total_mass - float(inst.m_star(model))
        assert Sign.of(diff) == v.ss_pop
