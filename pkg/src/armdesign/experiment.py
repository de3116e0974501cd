"""Experiment files: a JSON document defining one replication sweep.

Schema (all optimizer fields optional, defaults in parentheses):

    {
      "name": "target1-bbo",
      "targets": {"name": "...", "points": [[x, y, z], ...]},
      "mode": "bbo" | "bbo-llm-minus" | "bbo-llm-plus"   (bbo)
      "seeds": [0, 1, 2, 3, 4],                           ([0])
      "n_joints": 4, "n_init": 10, "n_step": 10, "n_total": 200,
      "n_pareto": 5, "n_random": 5, "alpha": 40.0,
      "ref_point": [5.0, 5.0],
      "backend": {"kind": "mock-heuristic" | "mock-script" | "http",
                  "script": "...", "base_url": "...", "model": "...",
                  "token_env": "...", "timeout": 60.0, "decoding": {...}},
      "out_dir": "runs/target1-bbo"
    }

Targets may also live in their own file ({"name", "points"}) referenced as
"targets": "path/to/targets.json"; relative paths resolve against the
experiment file's directory.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .evaluation import TargetSet
from .llm import BackendConfig
from .orchestrator import RunConfig, RunMode
from .space import SpaceConfig


class ExperimentError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    base: RunConfig  # seed field is a placeholder; per-seed configs come from configs()
    seeds: tuple[int, ...]
    out_dir: Path

    def configs(self) -> list[RunConfig]:
        from dataclasses import replace

        return [replace(self.base, seed=s) for s in self.seeds]


def load_targets(source, base_dir: Path | None = None) -> TargetSet:
    """Accept an inline {"name", "points"} mapping or a path to one."""
    if isinstance(source, (str, Path)):
        path = Path(source)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        try:
            source = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ExperimentError(f"cannot read targets file {path}: {exc}") from exc
    try:
        points = tuple(tuple(float(v) for v in p) for p in source["points"])
        return TargetSet(name=str(source.get("name", "targets")), points=points)
    except (KeyError, TypeError, ValueError) as exc:
        raise ExperimentError(f"malformed target set: {exc}") from exc


def _load_backend(raw: dict | None) -> BackendConfig:
    if not raw:
        return BackendConfig()
    known = {"kind", "script", "base_url", "model", "token_env", "timeout", "decoding"}
    unknown = set(raw) - known
    if unknown:
        raise ExperimentError(f"unknown backend keys: {sorted(unknown)}")
    return BackendConfig(
        kind=raw.get("kind", "mock-heuristic"),
        script_path=raw.get("script"),
        base_url=raw.get("base_url"),
        model=raw.get("model"),
        token_env=raw.get("token_env", "ARMDESIGN_API_TOKEN"),
        timeout=float(raw.get("timeout", 60.0)),
        decoding=tuple(sorted((raw.get("decoding") or {}).items())),
    )


def load_experiment(path) -> ExperimentSpec:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ExperimentError(f"cannot read experiment file {path}: {exc}") from exc

    if "targets" not in raw:
        raise ExperimentError("experiment file is missing 'targets'")
    targets = load_targets(raw["targets"], base_dir=path.parent)

    try:
        mode = RunMode(raw.get("mode", "bbo"))
    except ValueError as exc:
        raise ExperimentError(f"unknown mode {raw.get('mode')!r}") from exc

    backend = _load_backend(raw.get("backend"))
    if backend.script_path is not None:
        script = Path(backend.script_path)
        if not script.is_absolute():
            from dataclasses import replace as _replace

            backend = _replace(backend, script_path=str(path.parent / script))

    space = SpaceConfig(n_joints=int(raw.get("n_joints", 4)))
    try:
        base = RunConfig(
            targets=targets,
            space=space,
            mode=mode,
            n_init=int(raw.get("n_init", 10)),
            n_step=int(raw.get("n_step", 10)),
            n_total=int(raw.get("n_total", 200)),
            n_pareto=int(raw.get("n_pareto", 5)),
            n_random=int(raw.get("n_random", 5)),
            alpha=float(raw.get("alpha", 40.0)),
            ref_point=tuple(float(v) for v in raw.get("ref_point", (5.0, 5.0))),
            backend=backend,
            seed=0,
        )
    except (TypeError, ValueError) as exc:
        raise ExperimentError(f"invalid experiment settings: {exc}") from exc

    seeds = tuple(int(s) for s in raw.get("seeds", [0]))
    if not seeds:
        raise ExperimentError("seed list is empty")
    out_dir = Path(raw.get("out_dir", f"runs/{raw.get('name', path.stem)}"))
    if not out_dir.is_absolute():
        out_dir = path.parent / out_dir
    return ExperimentSpec(
        name=str(raw.get("name", path.stem)), base=base, seeds=seeds, out_dir=out_dir
    )
