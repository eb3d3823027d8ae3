"""Command-line front end: ``churnflow {steady,simulate,classify,table1,sabotage,sweep}``.

Exit codes: 0 success, 2 invalid input, 1 runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Optional

from churnflow import dynamics as dyn
from churnflow import instance as inst
from churnflow import regions, sabotage
from churnflow.instance import AlphaModel, Treatment
from churnflow.numeric import MODES, DomainError, convert, format_number, parse_number

log = logging.getLogger("churnflow")

# float for iteration-heavy commands, exact for the rest
DEFAULT_MODE = {
    "steady": "rational",
    "classify": "rational",
    "sabotage": "rational",
    "simulate": "float",
    "table1": "float",
    "sweep": "float",
}

TABLE1_Q1 = [Fraction(300 + 25 * i, 1000) for i in range(13)]
TABLE1_Q3 = [Fraction(64 + j, 100) for j in range(11)]
TABLE1_MAX_HORIZON = 10_000


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    alpha: str = "1/4"
    q1: Optional[str] = None
    q3: Optional[str] = None
    horizon: int = 75
    mode: Optional[str] = None
    rel_tol: str = "1e-3"
    out: Optional[str] = None
    steps: int = 5
    grid: int = 50

    @classmethod
    def from_sources(cls, args: argparse.Namespace) -> "RunConfig":
        cfg = cls()
        if args.config:
            try:
                with open(args.config, encoding="utf-8") as fh:
                    doc = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
            known = {f.name for f in fields(cls)}
            for key, value in doc.items():
                key = key.replace("-", "_")
                if key not in known:
                    raise ConfigError(f"unknown config key {key!r}")
                setattr(cfg, key, value)
        for f in fields(cls):
            value = getattr(args, f.name, None)
            if value is not None:
                setattr(cfg, f.name, value)
        return cfg

    def resolved_mode(self, command: str) -> str:
        mode = self.mode or DEFAULT_MODE[command]
        if mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {mode!r}")
        return mode

    def model(self, mode: str) -> AlphaModel:
        return AlphaModel(parse_number(str(self.alpha), mode))

    def treatment(self, mode: str, default: Optional[Treatment] = None) -> Optional[Treatment]:
        if self.q1 is None and self.q3 is None:
            return default
        if self.q1 is None or self.q3 is None:
            raise ConfigError("--q1 and --q3 must be given together")
        return Treatment(parse_number(str(self.q1), mode), parse_number(str(self.q3), mode))

    def check_counts(self) -> None:
        for name in ("horizon", "steps", "grid"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool):
                raise ConfigError(f"{name} must be an integer")
        if self.horizon < 0:
            raise ConfigError("horizon must be nonnegative")
        if self.steps < 1:
            raise ConfigError("steps must be at least 1")
        if self.grid < 1:
            raise ConfigError("grid must be at least 1")
        if float(Fraction(str(self.rel_tol))) <= 0:
            raise ConfigError("rel-tol must be positive")


def _fmt(v) -> str:
    return format_number(v)


def _type_label(t: dyn.UserType) -> str:
    return f"{float(t.x):g}_{float(t.e):g}"


def _mode_values(space: dyn.TypeSpace, mode: str) -> dyn.TypeSpace:
    return dyn.TypeSpace(space.types, tuple(convert(f, mode) for f in space.inflow))


def _write_csv(rows: list[list], header: list[str], out: Optional[str]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    text = buf.getvalue()
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_text(lines: list[str], out: Optional[str]) -> None:
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _steady_block(title: str, space: dyn.TypeSpace, q: dyn.QualityProfile) -> list[str]:
    ss = dyn.steady_state(space, q)
    lines = [title]
    for t, m in zip(ss.types, ss.mass):
        lines.append(f"  mass x={t.x} e={t.e}: {_fmt(m)}")
    lines.append(f"  total: {_fmt(ss.total_mass)}")
    lines.append(f"  arq: {_fmt(dyn.arq(ss, q))}")
    lines.append(f"  churn_rate: {_fmt(dyn.churn_rate(ss, q))}")
    return lines


def cmd_steady(cfg: RunConfig) -> int:
    mode = cfg.resolved_mode("steady")
    model = cfg.model(mode)
    treatment = cfg.treatment(mode)
    space, sq = inst.status_quo(model)
    space = _mode_values(space, mode)
    lines = _steady_block(f"status quo (alpha={model.alpha})", space, sq)
    if treatment is not None:
        lines += _steady_block(
            f"treatment (q1={treatment.q1}, q3={treatment.q3})", space, treatment.profile()
        )
    _emit_text(lines, cfg.out)
    return 0


def simulate_rows(cfg: RunConfig, mode: str) -> tuple[list[str], list[list[str]], dict]:
    model = cfg.model(mode)
    treatment = cfg.treatment(mode, default=inst.STATUS_QUO)
    space, sq = inst.status_quo(model)
    space = _mode_values(space, mode)
    pop0 = dyn.steady_state(space, sq)
    q = treatment.profile()
    traj = dyn.simulate(pop0, space, q, cfg.horizon)
    header = ["period", "total_mass", "arq", "churn_rate"] + [
        f"mass_{_type_label(t)}" for t in space.types
    ]
    rows = [
        [str(s.metrics.period), _fmt(s.metrics.total_mass), _fmt(s.metrics.arq), _fmt(s.metrics.churn_rate)]
        + [_fmt(m) for m in s.state.mass]
        for s in traj
    ]
    baseline = pop0.total_mass
    totals = [s.metrics.total_mass for s in traj]
    below = next((i for i, v in enumerate(totals) if i >= 1 and v < baseline), None)
    summary = {
        "peak_period": max(range(len(totals)), key=lambda i: totals[i]),
        "first_below_baseline": below,
        "convergence_time": dyn.convergence_time(
            pop0, space, q, float(Fraction(str(cfg.rel_tol)))
        ),
    }
    return header, rows, summary


def cmd_simulate(cfg: RunConfig) -> int:
    mode = cfg.resolved_mode("simulate")
    header, rows, summary = simulate_rows(cfg, mode)
    _write_csv(rows, header, cfg.out)
    print(
        f"peak at period {summary['peak_period']}; first below baseline: "
        f"{summary['first_below_baseline']}; converged (rel_tol={cfg.rel_tol}) "
        f"after {summary['convergence_time']} periods",
        file=sys.stderr,
    )
    return 0


def table1_filter(model: AlphaModel, t: Treatment) -> bool:
    """Cells shown in the table: experiment churn falls, steady population falls,
    and the sufficient conditions for a deceptive verdict hold."""
    return (
        regions.cond_churn_down(model, t)
        and regions.cond_pop_down(model, t)
        and regions.prop2_conditions(model, t)
    )


def table1_grid(alpha, mode: str = "float") -> list[list[Optional[int]]]:
    """First period below the status-quo total for each cell, ``None`` for blanks.

    The cell filter runs on the exact decimal grid values; several cells sit
    exactly on the population boundary and would flip under binary64 rounding.
    """
    exact_model = AlphaModel(Fraction(alpha))
    model = AlphaModel(convert(alpha, mode))
    space, sq = inst.status_quo(model)
    space = _mode_values(space, mode)
    pop0 = dyn.steady_state(space, sq)
    baseline = pop0.total_mass
    grid = []
    for q1 in TABLE1_Q1:
        row = []
        for q3 in TABLE1_Q3:
            if not table1_filter(exact_model, Treatment(q1, q3)):
                row.append(None)
                continue
            t = Treatment(convert(q1, mode), convert(q3, mode))
            n = dyn.first_period_below(pop0, space, t.profile(), baseline, TABLE1_MAX_HORIZON)
            if n is None:
                raise RuntimeError(
                    f"cell q1={q1}, q3={q3} passed the filter but never fell below baseline"
                )
            row.append(n)
        grid.append(row)
    return grid


def cmd_table1(cfg: RunConfig) -> int:
    mode = cfg.resolved_mode("table1")
    alpha = parse_number(str(cfg.alpha), "rational")
    AlphaModel(alpha)
    grid = table1_grid(alpha, mode)
    header = ["q1"] + [f"{float(q3):.2f}" for q3 in TABLE1_Q3]
    rows = [
        [f"{float(q1):.3f}"] + ["" if c is None else str(c) for c in row]
        for q1, row in zip(TABLE1_Q1, grid)
    ]
    _write_csv(rows, header, cfg.out)
    return 0


def cmd_classify(cfg: RunConfig) -> int:
    mode = cfg.resolved_mode("classify")
    # always decide on the exact parsed values; mode only changes how numbers print
    model = cfg.model("rational")
    t = cfg.treatment("rational", default=inst.STATUS_QUO)
    v = regions.classify(model, t)
    lines = [
        f"alpha={model.alpha} q1={t.q1} q3={t.q3}",
        f"verdict: {v.label}",
        f"  experiment arq: {v.exp_arq}",
        f"  experiment churn: {v.exp_churn}",
        f"  steady arq: {v.ss_arq}",
        f"  steady population: {v.ss_pop}",
        f"  deceptive: {str(v.deceptive).lower()}",
        "conditions:",
    ]
    for c in regions.evidence(model, t):
        lhs, rhs = convert(c.lhs, mode), convert(c.rhs, mode)
        mark = "holds" if c.holds else "fails"
        lines.append(f"  {c.name}: {_fmt(lhs)} {c.relation} {_fmt(rhs)} [{mark}] ({c.meaning})")
    lines.append(f"  lemma1-region: {str(regions.lemma1_region(model, t)).lower()}")
    lines.append(f"  corollary1-region: {str(regions.corollary1_region(model, t)).lower()}")
    lines.append(f"  deceptive-sufficient: {str(regions.prop2_conditions(model, t)).lower()}")
    try:
        lines.append(f"  elasticity: {_fmt(regions.elasticity(t))}")
    except ZeroDivisionError:
        lines.append("  elasticity: undefined (q3 = 3/4)")
    _emit_text(lines, cfg.out)
    return 0


SABOTAGE_HEADER = [
    "step", "from_q1", "from_q3", "to_q1", "to_q3",
    "exp_arq_before", "exp_arq_after", "exp_churn_before", "exp_churn_after",
    "steady_before", "steady_after",
]


def cmd_sabotage(cfg: RunConfig) -> int:
    mode = cfg.resolved_mode("sabotage")
    start = cfg.treatment(mode, default=Treatment(convert(inst.LOW, mode), convert(inst.HIGH, mode)))
    steps = sabotage.sabotage_sequence(start, cfg.steps)
    lines = [f"start q1={_fmt(start.q1)} q3={_fmt(start.q3)}, {len(steps)} steps"]
    for i, s in enumerate(steps, 1):
        lines.append(
            f"  step {i}: q1={float(s.to.q1):.6f} q3={float(s.to.q3):.6f} "
            f"arq {float(s.exp_arq_before):.6f}->{float(s.exp_arq_after):.6f} "
            f"churn {float(s.exp_churn_before):.6f}->{float(s.exp_churn_after):.6f} "
            f"steady {float(s.steady_before):.6f}->{float(s.steady_after):.6f}"
        )
    if len(steps) < cfg.steps:
        lines.append(f"  stopped early: segments converged to the diagonal after {len(steps)} steps")
    sys.stdout.write("\n".join(lines) + "\n")
    if cfg.out:
        rows = [
            [str(i), *(_fmt(v) for v in (
                s.frm.q1, s.frm.q3, s.to.q1, s.to.q3,
                s.exp_arq_before, s.exp_arq_after, s.exp_churn_before, s.exp_churn_after,
                s.steady_before, s.steady_after,
            ))]
            for i, s in enumerate(steps, 1)
        ]
        _write_csv(rows, SABOTAGE_HEADER, cfg.out)
    return 0


SWEEP_HEADER = ["alpha", "q1", "q3", "exp_arq", "exp_churn", "ss_arq", "ss_pop", "deceptive"]


def cmd_sweep(cfg: RunConfig) -> int:
    mode = cfg.resolved_mode("sweep")
    model = AlphaModel(parse_number(str(cfg.alpha), "rational"))
    rows = [
        [_fmt(convert(model.alpha, mode)), _fmt(convert(q1, mode)), _fmt(convert(q3, mode)),
         str(v.exp_arq), str(v.exp_churn), str(v.ss_arq), str(v.ss_pop), str(v.deceptive).lower()]
        for q1, q3, v in regions.sweep(model, cfg.grid)
    ]
    _write_csv(rows, SWEEP_HEADER, cfg.out)
    return 0


COMMANDS = {
    "steady": cmd_steady,
    "simulate": cmd_simulate,
    "classify": cmd_classify,
    "table1": cmd_table1,
    "sabotage": cmd_sabotage,
    "sweep": cmd_sweep,
}

HELP = {
    "steady": "steady-state masses, total, ARQ and churn for status quo and treatment",
    "simulate": "per-period CSV trajectory after switching to the treatment",
    "classify": "experiment vs steady-state verdict with the inequality evidence",
    "table1": "periods until total population falls below the status-quo level",
    "sabotage": "chain of experiment-passing treatments that shrink the user base",
    "sweep": "verdict for every point of a (q1, q3) grid at fixed alpha",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", help="inflow correlation parameter in (0, 1/2), e.g. 1/4")
    common.add_argument("--q1", help="treatment quality for the low segment")
    common.add_argument("--q3", help="treatment quality for the high segment")
    common.add_argument("--horizon", type=int, help="periods to simulate (default 75)")
    common.add_argument("--mode", choices=MODES, help="numeric mode")
    common.add_argument("--rel-tol", dest="rel_tol", help="relative tolerance for convergence")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--config", help="JSON file with any of the above; flags override")
    common.add_argument("--steps", type=int, help="sabotage chain length (default 5)")
    common.add_argument("--grid", type=int, help="sweep points per axis (default 50)")

    parser = argparse.ArgumentParser(
        prog="churnflow", description="Inflow/churn steady states and A/B experiment bias."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=HELP[name])
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage
        return 2 if exc.code else 0
    try:
        cfg = RunConfig.from_sources(args)
        cfg.check_counts()
        return COMMANDS[args.command](cfg)
    except (DomainError, ConfigError, sabotage.DegenerateStatusQuoError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
