"""LLM-proposed designs: feedback prompt, pluggable backends, two-call protocol.

Call 1 sends the problem setting, target list, and evaluated-design feedback and
asks for a new design with step-by-step reasoning. Call 2 asks the backend to
restate that answer as three bracketed lists (origin, joint letters, lengths),
which are parsed and clamped into bounds. Every backend call is recorded in the
outcome transcript whether or not it succeeds.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Protocol

import numpy as np
import requests

from .evaluation import EvaluationReport, TargetSet
from .space import DesignParams, JointType, SpaceConfig, JOINT_ANGLE_LIMIT
from .tpe import TrialRecord


class PromptVariant(Enum):
    LLM_MINUS = "llm-minus"  # general step-by-step instruction only
    LLM_PLUS = "llm-plus"  # adds the per-parameter analysis block


@dataclass(frozen=True)
class PromptContext:
    targets: TargetSet
    space: SpaceConfig
    pareto_feedback: tuple[EvaluationReport, ...]
    random_feedback: tuple[EvaluationReport, ...]
    variant: PromptVariant
    alpha: float = 40.0


def format_point(point) -> str:
    return "[" + ", ".join(repr(float(v)) for v in point) + "]"


def _format_seq(values, fmt: str = "{:.4f}") -> str:
    return "[" + ", ".join(fmt.format(float(v)) for v in values) + "]"


def _format_joints(joints) -> str:
    return "[" + ", ".join(jt.letter for jt in joints) + "]"


_PROBLEM_TEMPLATE = """\
You are designing a serial robot arm with {d} revolute joints mounted at a
configurable base position.

Design parameters:
- ORIGIN: base position [x, y, z] in meters, each component in [{olo}, {ohi}].
- JOINTS: sequence of {d} joint types, each one of R (roll, rotation about the
  local x axis), P (pitch, local y axis), or Y (yaw, local z axis).
- LINKS: {d} link lengths in meters, each in [{llo}, {lhi}].

Each joint moves within [-{qlim}, {qlim}] rad. With all joint angles at zero the
links stack vertically in a straight line above ORIGIN, and joint j is followed
by link j along its local +z axis.

The arm must reach the following target points (meters):
$TARGET

For every candidate design, inverse kinematics is solved from the zero posture
for each target point independently. The design is scored by two values, both
to be minimized:
- E_POS: sum over targets of the end-effector position error (m).
- E_TORQUE: {alpha} * sum over targets of the gravity-compensation torque norm (N*m).
Good designs trade these off; we are building the Pareto front over both.
"""

_FEEDBACK_HEADER = """\
Previously evaluated designs, with per-target diagnostics. E_EACH lists
(e_pos_i, e_torque_i) per target, REACHED the end-effector position per target,
TORQUES the joint-torque vector per target, and E_ALL the (E_POS, E_TORQUE)
totals.
"""

_TASK_LINES = """\
Propose ONE new design (ORIGIN, JOINTS, LINKS) that improves on the current
Pareto front. Think step by step.
"""

_ANALYSIS_BLOCK = """\
Before choosing values, analyze each parameter in turn:
- ORIGIN: where should the base sit relative to the target points? Consider
  symmetry of the workspace and whether lowering or shifting the base reduces
  either objective.
- JOINTS: which joint-type ordering reaches the targets? Consider how roll,
  pitch, and yaw axes combine, and that pitch-like axes bear gravity load while
  yaw axes aligned with gravity carry almost none.
- LINKS: how do link lengths affect reach and torque? Longer links extend reach
  but raise the gravity moment; match total length to the target distances.
"""

REFORMAT_TEMPLATE = """\
Extract the final proposed design from the answer below. Reply with exactly
three bracketed lists on one line and nothing else:
[x, y, z] [J1, ..., J{d}] [L1, ..., L{d}]
where x, y, z and each L are plain numbers and each J is one of R, P, Y.

Answer:
{answer}
"""

SYSTEM_MESSAGE = "You are an assistant for robot arm design optimization."


def build_prompt(ctx: PromptContext) -> str:
    """Render the full call-1 prompt for the given feedback context."""
    target_lines = "\n".join(format_point(p) for p in ctx.targets.points)
    problem = _PROBLEM_TEMPLATE.format(
        d=ctx.space.n_joints,
        olo=ctx.space.origin_low,
        ohi=ctx.space.origin_high,
        llo=ctx.space.length_low,
        lhi=ctx.space.length_high,
        qlim=JOINT_ANGLE_LIMIT,
        alpha=ctx.alpha,
    ).replace("$TARGET", target_lines)
    parts = [problem]
    if ctx.pareto_feedback or ctx.random_feedback:
        parts.append(_FEEDBACK_HEADER)
        blocks = [(r, "pareto") for r in ctx.pareto_feedback]
        blocks += [(r, "random") for r in ctx.random_feedback]
        for k, (report, pool) in enumerate(blocks, start=1):
            parts.append(_feedback_block(k, pool, report))
    parts.append(_TASK_LINES)
    if ctx.variant is PromptVariant.LLM_PLUS:
        parts.append(_ANALYSIS_BLOCK)
    return "\n".join(parts)


def _feedback_block(index: int, pool: str, report: EvaluationReport) -> str:
    p = report.params
    lines = [
        f"Design {index} ({pool}):",
        f"  ORIGIN: {_format_seq(p.origin)}",
        f"  JOINTS: {_format_joints(p.joints)}",
        f"  LINKS: {_format_seq(p.lengths)}",
        "  E_EACH: "
        + "; ".join(f"({o.e_pos:.4f}, {o.e_torque:.4f})" for o in report.per_target),
        "  REACHED: " + "; ".join(_format_seq(o.reached) for o in report.per_target),
        "  TORQUES: " + "; ".join(_format_seq(o.torque) for o in report.per_target),
        f"  E_ALL: ({report.objectives.e_pos:.4f}, {report.objectives.e_torque:.4f})",
    ]
    return "\n".join(lines) + "\n"


def build_reformat_prompt(answer: str, space: SpaceConfig) -> str:
    return REFORMAT_TEMPLATE.format(d=space.n_joints, answer=answer)


class BackendError(Exception):
    """Transport-level failure: timeout, HTTP error, exhausted script."""


class LLMBackend(Protocol):
    label: str

    def send(self, prompt: str) -> str: ...


@dataclass
class HttpChatBackend:
    """Chat-completion client over HTTP; auth token read from the environment."""

    base_url: str
    model: str
    token_env: str = "ARMDESIGN_API_TOKEN"
    timeout: float = 60.0
    decoding: dict = field(default_factory=dict)
    label: str = "http"

    def send(self, prompt: str) -> str:
        token = os.environ.get(self.token_env, "")
        if not token:
            raise BackendError(f"no API token in ${self.token_env}")
        body = {
            "model": self.model,
            "messages": [
                {"role": "system", "content": SYSTEM_MESSAGE},
                {"role": "user", "content": prompt},
            ],
            **self.decoding,
        }
        try:
            resp = requests.post(
                self.base_url.rstrip("/") + "/chat/completions",
                json=body,
                headers={"Authorization": f"Bearer {token}"},
                timeout=self.timeout,
            )
            resp.raise_for_status()
            data = resp.json()
            return data["choices"][0]["message"]["content"]
        except requests.RequestException as exc:
            raise BackendError(f"chat request failed: {exc}") from exc
        except (KeyError, IndexError, ValueError) as exc:
            raise BackendError(f"malformed chat response: {exc}") from exc


class ScriptedBackend:
    """Offline responder replaying an ordered list of responses."""

    label = "mock-script"

    def __init__(self, responses: list[str]):
        self._responses = list(responses)
        self._cursor = 0

    @classmethod
    def from_file(cls, path) -> "ScriptedBackend":
        import json

        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        return cls(data["responses"])

    def send(self, prompt: str) -> str:
        if self._cursor >= len(self._responses):
            raise BackendError("scripted responses exhausted")
        text = self._responses[self._cursor]
        self._cursor += 1
        return text


class HeuristicBackend:
    """Offline responder that always proposes the mid-range design."""

    label = "mock-heuristic"

    def __init__(self, space: SpaceConfig):
        self._space = space

    def send(self, prompt: str) -> str:
        s = self._space
        mid_len = 0.5 * (s.length_low + s.length_high)
        origin = "[0.0, 0.0, 0.0]"
        joints = "[" + ", ".join(["P"] * s.n_joints) + "]"
        lengths = "[" + ", ".join(f"{mid_len:.3f}" for _ in range(s.n_joints)) + "]"
        return f"A balanced mid-range design: {origin} {joints} {lengths}"


@dataclass(frozen=True)
class BackendConfig:
    """Declarative backend choice, resolvable to a fresh instance per run."""

    kind: str = "mock-heuristic"  # mock-heuristic | mock-script | http
    script_path: str | None = None
    base_url: str | None = None
    model: str | None = None
    token_env: str = "ARMDESIGN_API_TOKEN"
    timeout: float = 60.0
    decoding: tuple[tuple[str, object], ...] = ()

    def make(self, space: SpaceConfig) -> LLMBackend:
        if self.kind == "mock-heuristic":
            return HeuristicBackend(space)
        if self.kind == "mock-script":
            if not self.script_path:
                raise ValueError("mock-script backend needs script_path")
            return ScriptedBackend.from_file(self.script_path)
        if self.kind == "http":
            if not (self.base_url and self.model):
                raise ValueError("http backend needs base_url and model")
            return HttpChatBackend(
                base_url=self.base_url,
                model=self.model,
                token_env=self.token_env,
                timeout=self.timeout,
                decoding=dict(self.decoding),
            )
        raise ValueError(f"unknown backend kind {self.kind!r}")


@dataclass(frozen=True)
class TranscriptEntry:
    prompt: str
    response: str | None
    error: str | None = None


@dataclass(frozen=True)
class SamplerOutcome:
    params: DesignParams | None
    failure_reason: str | None
    transcript: tuple[TranscriptEntry, ...]

    @property
    def ok(self) -> bool:
        return self.params is not None


class ParseError(ValueError):
    pass


def parse_design_response(text: str, space: SpaceConfig) -> DesignParams:
    """Extract the last three bracketed groups as origin / joints / lengths.

    Numeric values outside the bounds are clamped in, not rejected.
    """
    import re

    groups = re.findall(r"\[([^\[\]]*)\]", text)
    if len(groups) < 3:
        raise ParseError(f"expected 3 bracketed groups, found {len(groups)}")
    origin_raw, joints_raw, lengths_raw = groups[-3:]

    def _split(raw: str) -> list[str]:
        return [tok for tok in (t.strip() for t in raw.replace(";", ",").split(",")) if tok]

    try:
        origin = [float(tok) for tok in _split(origin_raw)]
        lengths = [float(tok) for tok in _split(lengths_raw)]
    except ValueError as exc:
        raise ParseError(f"non-numeric value: {exc}") from exc
    joints = [JointType.from_letter(tok) for tok in _split(joints_raw)]

    if len(origin) != 3:
        raise ParseError(f"origin needs 3 values, got {len(origin)}")
    if len(joints) != space.n_joints:
        raise ParseError(f"joints needs {space.n_joints} entries, got {len(joints)}")
    if len(lengths) != space.n_joints:
        raise ParseError(f"lengths needs {space.n_joints} entries, got {len(lengths)}")

    origin = np.clip(origin, space.origin_low, space.origin_high)
    lengths = np.clip(lengths, space.length_low, space.length_high)
    return DesignParams(
        origin=tuple(float(v) for v in origin),
        joints=tuple(joints),
        lengths=tuple(float(v) for v in lengths),
    )


def propose(backend: LLMBackend, ctx: PromptContext) -> SamplerOutcome:
    """Run the two-call design/reformat protocol against a backend."""
    transcript: list[TranscriptEntry] = []

    design_prompt = build_prompt(ctx)
    try:
        answer = backend.send(design_prompt)
    except BackendError as exc:
        transcript.append(TranscriptEntry(design_prompt, None, str(exc)))
        return SamplerOutcome(None, f"transport: {exc}", tuple(transcript))
    transcript.append(TranscriptEntry(design_prompt, answer))

    reformat_prompt = build_reformat_prompt(answer, ctx.space)
    try:
        formatted = backend.send(reformat_prompt)
    except BackendError as exc:
        transcript.append(TranscriptEntry(reformat_prompt, None, str(exc)))
        return SamplerOutcome(None, f"transport: {exc}", tuple(transcript))
    transcript.append(TranscriptEntry(reformat_prompt, formatted))

    try:
        params = parse_design_response(formatted, ctx.space)
    except (ParseError, ValueError) as exc:
        return SamplerOutcome(None, f"parse: {exc}", tuple(transcript))
    return SamplerOutcome(params, None, tuple(transcript))


def select_feedback(
    trials: list[TrialRecord],
    archive: list[TrialRecord],
    rng: np.random.Generator,
    n_pareto: int,
    n_random: int,
) -> tuple[tuple[EvaluationReport, ...], tuple[EvaluationReport, ...]]:
    """Uniform without-replacement picks: n_pareto from the archive, n_random overall."""

    def _draw(pool: list[TrialRecord], k: int) -> tuple[EvaluationReport, ...]:
        if not pool or k <= 0:
            return ()
        k = min(k, len(pool))
        idx = rng.choice(len(pool), size=k, replace=False)
        return tuple(pool[i].report for i in sorted(idx))

    return _draw(archive, n_pareto), _draw(trials, n_random)
