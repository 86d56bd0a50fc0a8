from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

from cw2lab import config
from cw2lab.application.schemas import (
    CheckResult,
    CltRow,
    CombCheckRow,
    CriticalRow,
    ExperimentConfig,
    ExperimentReport,
    LlnRow,
    MomentsRow,
    SampleRow,
    SolveMRow,
    SublinearRow,
)
from cw2lab.domain.errors import DomainError
from cw2lab.domain.models import (
    COMMAND_CLT,
    COMMAND_COMB_CHECK,
    COMMAND_CRITICAL,
    COMMAND_LLN,
    COMMAND_MOMENTS,
    COMMAND_SAMPLE,
    COMMAND_SOLVE_M,
    COMMAND_SUBLINEAR,
    ChainConfig,
    ModelParams,
    MomentQuery,
    PairDistribution,
    Scaling,
)
from cw2lab.engine import combinatorics, exact, limits, sampling

logger = logging.getLogger(__name__)

T = TypeVar("T")

TREND_POINTS = 3
TREND_SLACK = 1e-12
ZERO_TOL = 1e-12
MOMENTS_REL_TOL = 1e-10
SAMPLE_Z_MAX = 3.0
SAMPLE_MAX_ORDER = 4


def chain_from_config(cfg: ExperimentConfig) -> ChainConfig:
    return ChainConfig(sweeps=cfg.sweeps, burn_in=cfg.burn_in, thin=cfg.thin, seed=cfg.seed)


def non_increasing(values: Sequence[float], *, slack: float = TREND_SLACK) -> bool:
    """True when the last TREND_POINTS values never go up by more than slack."""
    tail = list(values)[-TREND_POINTS:]
    return all(later <= earlier + slack for earlier, later in zip(tail, tail[1:]))


def non_decreasing(values: Sequence[float], *, slack: float = TREND_SLACK) -> bool:
    return non_increasing([-v for v in values], slack=slack)


def strictly_decreasing(values: Sequence[float]) -> bool:
    tail = list(values)[-TREND_POINTS:]
    return all(later < earlier for earlier, later in zip(tail, tail[1:]))


def _exponent_pairs(k_max: int, l_max: int) -> list[tuple[int, int]]:
    return [(k, l) for k in range(k_max + 1) for l in range(l_max + 1) if k + l > 0]


def _fmt(values: Sequence[float]) -> str:
    return ",".join(f"{v:.3e}" for v in values)


class ExperimentService:
    """Runs one convergence experiment per command and collects rows and checks."""

    def __init__(self, *, workers: int | None = None, max_entries: int | None = None) -> None:
        self._workers = workers or config.workers()
        self._max_entries = max_entries
        self._handlers: dict[str, Callable[[ExperimentConfig], ExperimentReport]] = {
            COMMAND_LLN: self.cmd_lln,
            COMMAND_CLT: self.cmd_clt,
            COMMAND_SUBLINEAR: self.cmd_sublinear,
            COMMAND_CRITICAL: self.cmd_critical,
            COMMAND_MOMENTS: self.cmd_moments,
            COMMAND_SOLVE_M: self.cmd_solve_m,
            COMMAND_COMB_CHECK: self.cmd_comb_check,
            COMMAND_SAMPLE: self.cmd_sample,
        }

    def run(self, cfg: ExperimentConfig) -> ExperimentReport:
        logger.info("experiment.start command=%s schedule=%s beta=%s", cfg.command, cfg.n_schedule, cfg.beta)
        report = self._handlers[cfg.command](cfg)
        for check in report.failed_checks:
            logger.warning("experiment.check.failed name=%s detail=%s", check.name, check.detail)
        logger.info(
            "experiment.done command=%s rows=%s checks=%s failed=%s",
            cfg.command,
            len(report.rows),
            len(report.checks),
            len(report.failed_checks),
        )
        return report

    def _over_schedule(self, fn: Callable[[int], T], schedule: Sequence[int]) -> list[T]:
        # results come back in schedule order whatever the worker count
        if self._workers > 1 and len(schedule) > 1:
            with ThreadPoolExecutor(max_workers=self._workers) as pool:
                return list(pool.map(fn, schedule))
        return [fn(n) for n in schedule]

    def _distribution(self, n_total: int, n1: int, n2: int, beta: float) -> PairDistribution:
        params = ModelParams(n_total=n_total, n1=n1, n2=n2, beta=beta)
        return exact.exact_pair_distribution(params, workers=self._workers, max_entries=self._max_entries)

    def cmd_clt(self, cfg: ExperimentConfig) -> ExperimentReport:
        if cfg.beta >= 1.0:
            raise DomainError(f"no central limit theorem for beta >= 1 (got beta={cfg.beta})")
        limit = limits.gaussian_cov(cfg.alpha1, cfg.alpha2, cfg.beta)
        pairs = _exponent_pairs(cfg.k_max, cfg.l_max)
        targets = {
            (k, l): (
                limits.closed_form_moment(k, l, cfg.alpha1, cfg.alpha2, cfg.beta),
                limits.gaussian_moment(limit, k, l),
            )
            for k, l in pairs
        }

        def point(n_total: int) -> list[CltRow]:
            n1, n2 = exact.group_sizes(n_total, cfg.alpha1, cfg.alpha2)
            dist = self._distribution(n_total, n1, n2, cfg.beta)
            table = exact.mixed_moment_table(dist, cfg.k_max, cfg.l_max, Scaling.SQRT_SPIN)
            rows = []
            for k, l in pairs:
                closed_form, isserlis = targets[(k, l)]
                value = float(table[k, l])
                rows.append(
                    CltRow(
                        n_total=n_total,
                        n1=n1,
                        n2=n2,
                        k=k,
                        l=l,
                        exact_moment=value,
                        closed_form=closed_form,
                        isserlis=isserlis,
                        abs_err=abs(value - closed_form),
                    )
                )
            return rows

        rows = [row for chunk in self._over_schedule(point, cfg.n_schedule) for row in chunk]
        checks = []
        for k, l in pairs:
            errors = [row.abs_err for row in rows if (row.k, row.l) == (k, l)]
            checks.append(
                CheckResult(
                    name=f"clt.trend k={k} l={l}",
                    passed=non_increasing(errors),
                    detail=f"abs_err={_fmt(errors)}",
                )
            )
        return ExperimentReport(config=cfg, rows=rows, checks=checks)

    def cmd_lln(self, cfg: ExperimentConfig) -> ExperimentReport:
        limit = limits.lln_limit(cfg.beta)
        aligned = [atom for atom, _ in limit.atoms]
        m = limit.m
        corners = limits.uncoupled_lln_limit(cfg.beta).atoms
        anti_aligned = [atom for atom, _ in corners if atom not in aligned] or None

        def point(n_total: int) -> LlnRow:
            n1, n2 = exact.group_sizes(n_total, cfg.alpha1, cfg.alpha2)
            dist = self._distribution(n_total, n1, n2, cfg.beta)
            return LlnRow(
                n_total=n_total,
                n1=n1,
                n2=n2,
                m=m,
                aligned_mass=dist.mass_within(aligned, cfg.epsilon),
                anti_aligned_mass=dist.mass_within(anti_aligned, cfg.epsilon) if anti_aligned else None,
            )

        rows = self._over_schedule(point, cfg.n_schedule)
        masses = [row.aligned_mass for row in rows]
        checks = [
            CheckResult(name="lln.aligned.trend", passed=non_decreasing(masses), detail=f"mass={_fmt(masses)}")
        ]
        if anti_aligned:
            last = rows[-1]
            checks.append(
                CheckResult(
                    name="lln.aligned.mass",
                    passed=last.aligned_mass >= 0.99,
                    detail=f"n_total={last.n_total} mass={last.aligned_mass:.6f}",
                )
            )
            checks.append(
                CheckResult(
                    name="lln.anti_aligned.mass",
                    passed=last.anti_aligned_mass <= 1e-3,
                    detail=f"n_total={last.n_total} mass={last.anti_aligned_mass:.3e}",
                )
            )
        return ExperimentReport(config=cfg, rows=rows, checks=checks)

    def cmd_sublinear(self, cfg: ExperimentConfig) -> ExperimentReport:
        target_var2 = 1.0 + cfg.alpha2 * limits.beta_bar(cfg.beta)

        def point(n_total: int) -> SublinearRow:
            n1, n2 = exact.group_sizes(n_total, 0.0, cfg.alpha2, sublinear=True)
            dist = self._distribution(n_total, n1, n2, cfg.beta)
            table = exact.mixed_moment_table(dist, 2, 2, Scaling.SQRT_SPIN)
            return SublinearRow(
                n_total=n_total,
                n1=n1,
                n2=n2,
                var1=float(table[2, 0]),
                cov=float(table[1, 1]),
                var2=float(table[0, 2]),
                target_var1=1.0,
                target_cov=0.0,
                target_var2=target_var2,
            )

        rows = self._over_schedule(point, cfg.n_schedule)
        deviations = {
            "var1": [abs(row.var1 - row.target_var1) for row in rows],
            "cov": [abs(row.cov - row.target_cov) for row in rows],
            "var2": [abs(row.var2 - row.target_var2) for row in rows],
        }
        checks = [
            CheckResult(name=f"sublinear.{name}.trend", passed=non_increasing(values), detail=f"dev={_fmt(values)}")
            for name, values in deviations.items()
        ]
        return ExperimentReport(config=cfg, rows=rows, checks=checks)

    def cmd_critical(self, cfg: ExperimentConfig) -> ExperimentReport:
        if cfg.beta != 1.0:
            raise DomainError(f"critical scaling needs beta = 1, got beta={cfg.beta}")
        pairs = [(0, 0)] + _exponent_pairs(cfg.k_max, cfg.l_max)
        targets = {(k, l): limits.critical_moment(k, l, cfg.alpha1, cfg.alpha2) for k, l in pairs}

        def point(n_total: int) -> list[CriticalRow]:
            n1, n2 = exact.group_sizes(n_total, cfg.alpha1, cfg.alpha2)
            dist = self._distribution(n_total, n1, n2, cfg.beta)
            table = exact.mixed_moment_table(dist, cfg.k_max, cfg.l_max, Scaling.CRITICAL)
            return [
                CriticalRow(
                    n_total=n_total,
                    n1=n1,
                    n2=n2,
                    k=k,
                    l=l,
                    exact_moment=float(table[k, l]),
                    critical_moment=targets[(k, l)],
                    abs_err=abs(float(table[k, l]) - targets[(k, l)]),
                )
                for k, l in pairs
            ]

        rows = [row for chunk in self._over_schedule(point, cfg.n_schedule) for row in chunk]
        checks = []
        for k, l in pairs:
            errors = [row.abs_err for row in rows if (row.k, row.l) == (k, l)]
            if (k + l) % 2 or k + l == 0:
                checks.append(
                    CheckResult(
                        name=f"critical.exact k={k} l={l}",
                        passed=max(errors) <= ZERO_TOL,
                        detail=f"abs_err={_fmt(errors)}",
                    )
                )
            else:
                checks.append(
                    CheckResult(
                        name=f"critical.trend k={k} l={l}",
                        passed=strictly_decreasing(errors),
                        detail=f"abs_err={_fmt(errors)}",
                    )
                )
        return ExperimentReport(config=cfg, rows=rows, checks=checks)

    def cmd_moments(self, cfg: ExperimentConfig) -> ExperimentReport:
        limit = limits.gaussian_cov(cfg.alpha1, cfg.alpha2, cfg.beta)
        rows = []
        for k, l in _exponent_pairs(cfg.k_max, cfg.l_max):
            closed_form = limits.closed_form_moment(k, l, cfg.alpha1, cfg.alpha2, cfg.beta)
            isserlis = limits.gaussian_moment(limit, k, l)
            brute = None
            if k + l <= limits.ISSERLIS_BRUTE_MAX_ORDER:
                brute = limits.isserlis_brute(k, l, limit.c11, limit.c12, limit.c22)
            diff = max(abs(closed_form - isserlis), abs(closed_form - brute) if brute is not None else 0.0)
            scale = abs(closed_form) if closed_form != 0.0 else 1.0
            rows.append(
                MomentsRow(k=k, l=l, closed_form=closed_form, isserlis=isserlis, isserlis_brute=brute, rel_err=diff / scale)
            )
        worst = max((row.rel_err for row in rows), default=0.0)
        checks = [
            CheckResult(
                name="moments.dual_formula",
                passed=worst <= MOMENTS_REL_TOL,
                detail=f"max_rel_err={worst:.3e}",
            )
        ]
        return ExperimentReport(config=cfg, rows=rows, checks=checks)

    def cmd_solve_m(self, cfg: ExperimentConfig) -> ExperimentReport:
        rows = []
        for beta in cfg.betas:
            m = limits.solve_m(beta)
            rows.append(SolveMRow(beta=beta, m=m, residual=abs(math.tanh(beta * m) - m)))
        worst = max(row.residual for row in rows)
        checks = [
            CheckResult(name="solve-m.residual", passed=worst < limits.RESIDUAL_TOL, detail=f"max_residual={worst:.3e}")
        ]
        return ExperimentReport(config=cfg, rows=rows, checks=checks)

    def cmd_comb_check(self, cfg: ExperimentConfig) -> ExperimentReport:
        rows = []
        for l_total in range(1, cfg.k_max + 1):
            profiles = len(combinatorics.enumerate_profiles(l_total))
            p = combinatorics.partition_number(l_total)
            for n in cfg.n_schedule:
                total = combinatorics.profile_sum(l_total, n)
                ok = total == n**l_total and profiles == p
                rows.append(
                    CombCheckRow(
                        l_total=l_total,
                        n=n,
                        profiles=profiles,
                        partition_number=p,
                        profile_sum=total,
                        n_power=n**l_total,
                        status="OK" if ok else "FAIL",
                    )
                )
        failures = [f"L={row.l_total},N={row.n}" for row in rows if row.status == "FAIL"]
        checks = [
            CheckResult(
                name="comb-check.identities",
                passed=not failures,
                detail=";".join(failures) if failures else f"{len(rows)} identities hold",
            )
        ]
        return ExperimentReport(config=cfg, rows=rows, checks=checks)

    def cmd_sample(self, cfg: ExperimentConfig) -> ExperimentReport:
        pairs = [
            (k, l)
            for k, l in _exponent_pairs(cfg.k_max, cfg.l_max)
            if k + l <= SAMPLE_MAX_ORDER
        ]
        chain_cfg = chain_from_config(cfg)

        def point(n_total: int) -> list[SampleRow]:
            n1, n2 = exact.group_sizes(n_total, cfg.alpha1, cfg.alpha2)
            dist = self._distribution(n_total, n1, n2, cfg.beta)
            table = exact.mixed_moment_table(dist, cfg.k_max, cfg.l_max, Scaling.SQRT_SPIN)
            batches = {
                "exact": sampling.sample_exact(dist, cfg.n_draws, cfg.seed, workers=self._workers),
                "glauber": sampling.glauber_chain(dist.params, chain_cfg),
            }
            rows = []
            for sampler, batch in batches.items():
                for k, l in pairs:
                    # a single chain sits in one phase, so odd moments are not comparable
                    if sampler == "glauber" and (k + l) % 2:
                        continue
                    estimate, std_error = sampling.empirical_moments(batch, MomentQuery(k, l, Scaling.SQRT_SPIN))
                    target = float(table[k, l])
                    rows.append(
                        SampleRow(
                            n_total=n_total,
                            n1=n1,
                            n2=n2,
                            sampler=sampler,
                            k=k,
                            l=l,
                            estimate=estimate,
                            std_error=std_error,
                            exact=target,
                            z_score=(estimate - target) / std_error if std_error > 0.0 else None,
                        )
                    )
            return rows

        rows = [row for chunk in self._over_schedule(point, cfg.n_schedule) for row in chunk]
        checks = []
        for row in rows:
            if row.z_score is None:
                passed = abs(row.estimate - row.exact) <= ZERO_TOL
            else:
                passed = abs(row.z_score) <= SAMPLE_Z_MAX
            checks.append(
                CheckResult(
                    name=f"sample.{row.sampler} n_total={row.n_total} k={row.k} l={row.l}",
                    passed=passed,
                    detail=f"z={row.z_score}",
                )
            )
        return ExperimentReport(config=cfg, rows=rows, checks=checks)


__all__ = [
    "ExperimentService",
    "chain_from_config",
    "non_decreasing",
    "non_increasing",
    "strictly_decreasing",
]
