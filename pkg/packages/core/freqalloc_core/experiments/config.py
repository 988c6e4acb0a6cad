"""
Experiment configuration and its ``key = value`` text format

One assignment per line, ``#`` starts a comment, sections use dotted keys
(``deployment.num_ues = 40``) and list values are comma separated. Keys not
present keep their documented defaults, so an empty file is a valid config.
"""

from __future__ import annotations

import logging
import typing
from enum import Enum
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from ..channel.models import DeploymentConfig, FadingParams
from ..errors import ConfigError
from ..objective.evaluate import ObjectiveWeights
from ..optim.aquila import AoConfig
from ..optim.ddpg import DdpgHyper, NetworkConfig
from ..optim.hybrid import HybridConfig
from ..phy.precoding import PowerNormalization

logger = logging.getLogger(__name__)

SOLVERS = ("ao", "rlm", "hym")
_NULL_WORDS = {"none", "null"}


class ClusteringConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    cluster_size: int = Field(8, ge=1, description="Serving APs per UE (M)")
    normalization: PowerNormalization = PowerNormalization.UNIT


class TrainingConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    episodes: int = Field(50, ge=1)
    horizon: int = Field(20, ge=1, description="Reallocation steps per episode")


class TuningConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    trials: int = Field(6, ge=1)
    episodes: int = Field(10, ge=1, description="Training budget per trial")


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    experiment_id: str = "freqalloc"
    solver: str = Field("hym", description="Solver used by sweeps: ao, rlm or hym")
    seeds: list[int] = Field(default_factory=lambda: [0, 1, 2], min_length=1)
    output_dir: str = "runs"
    record_wall_time: bool = False

    deployment: DeploymentConfig = DeploymentConfig()
    fading: FadingParams = FadingParams()
    weights: ObjectiveWeights = ObjectiveWeights()
    clustering: ClusteringConfig = ClusteringConfig()
    ao: AoConfig = AoConfig()
    ddpg: DdpgHyper = DdpgHyper()
    hybrid: HybridConfig = HybridConfig()
    training: TrainingConfig = TrainingConfig()
    network: NetworkConfig = NetworkConfig()
    tuning: TuningConfig = TuningConfig()

    @field_validator("solver")
    @classmethod
    def _known_solver(cls, value: str) -> str:
        value = value.strip().lower()
        if value not in SOLVERS:
            raise ValueError(f"unknown solver {value!r}; valid solvers are {', '.join(SOLVERS)}")
        return value

    @field_validator("seeds")
    @classmethod
    def _seed_range(cls, value: list[int]) -> list[int]:
        for seed in value:
            if not 0 <= seed < 1 << 64:
                raise ValueError(f"seed {seed} is not a 64-bit unsigned integer")
        return value

    def with_seeds(self, seeds: list[int]) -> ExperimentConfig:
        return self.model_validate({**self.model_dump(), "seeds": seeds})


def _section_models() -> dict[str, type[BaseModel]]:
    sections = {}
    for name, field in ExperimentConfig.model_fields.items():
        if isinstance(field.annotation, type) and issubclass(field.annotation, BaseModel):
            sections[name] = field.annotation
    return sections


def _is_sequence(annotation) -> bool:
    origin = typing.get_origin(annotation)
    if origin in (list, tuple):
        return True
    return any(_is_sequence(arg) for arg in typing.get_args(annotation) if arg is not type(None))


def _convert(raw: str, annotation):
    if raw.lower() in _NULL_WORDS:
        return None
    if _is_sequence(annotation):
        return [item.strip() for item in raw.split(",") if item.strip()]
    return raw


def parse_config_text(text: str, source: str = "<config>") -> ExperimentConfig:
    sections = _section_models()
    data: dict = {}
    lines: dict[tuple[str, ...], int] = {}

    for lineno, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        if "=" not in content:
            raise ConfigError(f"expected 'key = value', got {content!r}", lineno)
        key, raw = (part.strip() for part in content.split("=", 1))
        path = tuple(key.split("."))

        if len(path) == 1 and path[0] in ExperimentConfig.model_fields and path[0] not in sections:
            annotation = ExperimentConfig.model_fields[path[0]].annotation
        elif len(path) == 2 and path[0] in sections and path[1] in sections[path[0]].model_fields:
            annotation = sections[path[0]].model_fields[path[1]].annotation
        else:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if path in lines:
            raise ConfigError(f"duplicate key {key!r} (first set on line {lines[path]})", lineno)

        lines[path] = lineno
        target = data.setdefault(path[0], {}) if len(path) == 2 else data
        target[path[-1]] = _convert(raw, annotation)

    try:
        config = ExperimentConfig.model_validate(data)
    except ValidationError as e:
        error = e.errors()[0]
        loc = tuple(str(part) for part in error["loc"] if not isinstance(part, int))
        line = lines.get(loc[:2]) or lines.get(loc[:1])
        if line is None:
            line = next((n for path, n in lines.items() if path[0] == loc[0]), None) if loc else None
        key = ".".join(loc[:2]) or "config"
        raise ConfigError(f"{source}: {key}: {error['msg']}", line) from e

    logger.debug("Parsed %d settings from %s", len(lines), source)
    return config


def parse_config(path: Path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    return parse_config_text(text, source=str(path))


def _format(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, list | tuple):
        return ", ".join(_format(v) for v in value)
    return str(value)


def serialize_config(config: ExperimentConfig) -> str:
    """Every setting, one per line; ``parse_config_text`` of the result equals ``config``"""
    sections = _section_models()
    dumped = config.model_dump(mode="json")
    out = []
    for name in ExperimentConfig.model_fields:
        if name not in sections:
            out.append(f"{name} = {_format(dumped[name])}")
    for name in sections:
        out.append("")
        out.append(f"# {name}")
        for key, value in dumped[name].items():
            out.append(f"{name}.{key} = {_format(value)}")
    return "\n".join(out) + "\n"
