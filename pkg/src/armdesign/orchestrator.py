"""Hybrid sampling schedule: random warmup, then an LLM proposal at the head of
each block of n_step iterations with TPE suggestions filling the rest.

Warmup trials enter the archive and feedback pools but the iteration axis (and
the hypervolume curve) starts after them. A failed LLM slot falls back to a TPE
suggestion, recorded as BBO with the fallback flag so scheduled slots stay
accountable. Runs are deterministic given the seed and an offline backend.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .evaluation import TargetSet, evaluate
from .kinematics import GravityModel, IKConfig
from .llm import (
    BackendConfig,
    LLMBackend,
    PromptContext,
    PromptVariant,
    TranscriptEntry,
    propose,
    select_feedback,
)
from .pareto import DEFAULT_REF_POINT, hypervolume_2d, pareto_front
from .space import SpaceConfig, random_sample
from .tpe import SampleSource, TpeConfig, TrialRecord, suggest


class RunMode(Enum):
    BBO = "bbo"
    BBO_LLM_MINUS = "bbo-llm-minus"
    BBO_LLM_PLUS = "bbo-llm-plus"

    @property
    def uses_llm(self) -> bool:
        return self is not RunMode.BBO

    @property
    def variant(self) -> PromptVariant:
        if self is RunMode.BBO_LLM_PLUS:
            return PromptVariant.LLM_PLUS
        return PromptVariant.LLM_MINUS


@dataclass(frozen=True)
class RunConfig:
    targets: TargetSet
    space: SpaceConfig = SpaceConfig()
    mode: RunMode = RunMode.BBO
    n_init: int = 10
    n_step: int = 10
    n_total: int = 200
    n_pareto: int = 5
    n_random: int = 5
    alpha: float = 40.0
    ref_point: tuple[float, float] = DEFAULT_REF_POINT
    ik: IKConfig = IKConfig()
    gravity: GravityModel = GravityModel()
    tpe: TpeConfig = TpeConfig()
    backend: BackendConfig = field(default_factory=BackendConfig)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_init < 0:
            raise ValueError("n_init must be >= 0")
        if self.n_step < 1:
            raise ValueError("n_step must be >= 1")
        if self.n_total < 1:
            raise ValueError("n_total must be >= 1")


@dataclass
class RunResult:
    config: RunConfig
    ledger: list[TrialRecord]  # n_init warmup records, then n_total iteration records
    hv_curve: np.ndarray  # hypervolume after each post-warmup iteration
    archive: list[TrialRecord]  # final Pareto front over the whole ledger
    transcripts: dict[int, tuple[TranscriptEntry, ...]]  # iteration -> backend calls


def source_for_iteration(t: int, mode: RunMode, n_step: int) -> SampleSource:
    """Scheduled source for post-warmup iteration t (1-based)."""
    if t < 1:
        raise ValueError("iterations are 1-based")
    if mode.uses_llm and (t - 1) % n_step == 0:
        return SampleSource.LLM
    return SampleSource.BBO


def run(config: RunConfig) -> RunResult:
    """Execute one seeded optimization run."""
    rng = np.random.default_rng(config.seed)
    backend: LLMBackend | None = (
        config.backend.make(config.space) if config.mode.uses_llm else None
    )

    ledger: list[TrialRecord] = []
    archive: list[TrialRecord] = []
    transcripts: dict[int, tuple[TranscriptEntry, ...]] = {}

    def _record(params, source: SampleSource, fallback: bool = False) -> None:
        report = evaluate(
            params, config.targets, gravity=config.gravity, ik_cfg=config.ik, alpha=config.alpha
        )
        trial = TrialRecord(
            id=len(ledger),
            source=source,
            params=params,
            objectives=report.objectives,
            report=report,
            fallback=fallback,
        )
        ledger.append(trial)
        archive[:] = pareto_front(ledger)

    for _ in range(config.n_init):
        _record(random_sample(rng, config.space), SampleSource.RANDOM)

    hv_curve = np.empty(config.n_total)
    for t in range(1, config.n_total + 1):
        source = source_for_iteration(t, config.mode, config.n_step)
        if source is SampleSource.LLM:
            pareto_fb, random_fb = select_feedback(
                ledger, archive, rng, config.n_pareto, config.n_random
            )
            ctx = PromptContext(
                targets=config.targets,
                space=config.space,
                pareto_feedback=pareto_fb,
                random_feedback=random_fb,
                variant=config.mode.variant,
                alpha=config.alpha,
            )
            outcome = propose(backend, ctx)
            transcripts[t] = outcome.transcript
            if outcome.ok:
                _record(outcome.params, SampleSource.LLM)
            else:
                _record(suggest(rng, ledger, config.tpe, config.space), SampleSource.BBO, fallback=True)
        else:
            _record(suggest(rng, ledger, config.tpe, config.space), SampleSource.BBO)
        hv_curve[t - 1] = hypervolume_2d([tr.objectives for tr in archive], config.ref_point)

    return RunResult(
        config=config,
        ledger=ledger,
        hv_curve=hv_curve,
        archive=list(archive),
        transcripts=transcripts,
    )


@dataclass(frozen=True)
class AggregateResult:
    """Pointwise statistics of hypervolume curves across seeds."""

    seeds: tuple[int, ...]
    mean: np.ndarray  # per-iteration mean
    std: np.ndarray  # per-iteration population standard deviation
    final_per_seed: tuple[float, ...]
    mean_hv: float  # run-and-iteration-averaged hypervolume
    mean_std: float  # iteration-averaged standard deviation


def aggregate_runs(results: list[RunResult]) -> AggregateResult:
    """Combine seeded replicas of the same configuration."""
    if not results:
        raise ValueError("no runs to aggregate")
    base = replace(results[0].config, seed=0)
    for r in results[1:]:
        if replace(r.config, seed=0) != base:
            raise ValueError("runs differ in more than the seed")
    curves = np.stack([r.hv_curve for r in results])
    mean = curves.mean(axis=0)
    std = curves.std(axis=0)  # population sigma
    return AggregateResult(
        seeds=tuple(r.config.seed for r in results),
        mean=mean,
        std=std,
        final_per_seed=tuple(float(c[-1]) for c in curves),
        mean_hv=float(mean.mean()),
        mean_std=float(std.mean()),
    )
