"""
Run configuration for the `leaf` commands.

A run is described by a nested `RunConfig`. On disk (and on the command line)
it is flat: every field is addressed by a dotted key such as `explain.k`,
list fields take comma lists, and CLI flags of the same name override the
config file.
"""

import logging
import types
from pathlib import Path
from typing import Any, Self, Union, get_args, get_origin

from dotenv import dotenv_values
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from leaf.models.base import ModelSpec
from leaf.schema.explanation import NeighborhoodConfig
from leaf.schema.models import ExplainerMethod, ModelFamily, ReportFormat
from leaf.utils.error_handler import ConfigError

logger = logging.getLogger(__name__)


def parse_architecture(text: str) -> list[int]:
    """Layer widths of an architecture such as `100` or `50x50`."""
    try:
        layers = [int(width) for width in text.lower().split("x")]
    except ValueError:
        raise ValueError(f"bad mlp architecture '{text}', expected widths like 50x50") from None
    if any(width < 1 for width in layers):
        raise ValueError(f"bad mlp architecture '{text}', widths must be >= 1")
    return layers


class DatasetSection(BaseModel):
    path: Path | None = Field(default=None, description="CSV file, last column is the label")
    synthetic: str | None = Field(default=None, description="Name of a synthetic generator")
    rows: int = Field(default=1000, ge=2, description="Rows drawn for a synthetic dataset")
    test_fraction: float = Field(default=0.2, gt=0, lt=1)

    @model_validator(mode="after")
    def check_source(self) -> Self:
        if (self.path is None) == (self.synthetic is None):
            raise ValueError("set exactly one of dataset.path and dataset.synthetic")
        return self


class ModelSection(BaseModel):
    families: list[ModelFamily] = Field(default_factory=lambda: [ModelFamily.RF], min_length=1)
    n_estimators: int = Field(default=50, ge=1)
    max_depth: int = Field(default=5, ge=1)
    n_neighbors: int = Field(default=3, ge=1)
    hidden_layers: list[int] = Field(default_factory=lambda: [100], min_length=1)
    mlp_architectures: list[str] | None = Field(
        default=None,
        description="One mlp per entry, layer widths joined by 'x' (e.g. 100x100)",
    )
    epochs: int = Field(default=200, ge=1)
    max_iter: int = Field(default=2000, ge=1)
    learning_rate: float = Field(default=0.01, gt=0)
    batch_size: int = Field(default=32, ge=1)
    l2: float = Field(default=1.0, ge=0)

    @field_validator("families")
    @classmethod
    def check_distinct(cls, families: list[ModelFamily]) -> list[ModelFamily]:
        if len(set(families)) != len(families):
            raise ValueError("model families must be distinct")
        return families

    @field_validator("mlp_architectures")
    @classmethod
    def check_architectures(cls, architectures: list[str] | None) -> list[str] | None:
        if architectures is None:
            return None
        parsed = {tuple(parse_architecture(architecture)) for architecture in architectures}
        if len(parsed) != len(architectures):
            raise ValueError("mlp architectures must be distinct")
        return architectures

    def specs(self, seed: int) -> list[ModelSpec]:
        """
        One spec per family, except that `mlp_architectures` expands the mlp
        family into one spec per architecture, named `mlp[<widths>]`.
        """
        knobs = self.model_dump(exclude={"families", "mlp_architectures"})
        specs = []
        for family in self.families:
            if family == ModelFamily.MLP and self.mlp_architectures:
                for architecture in self.mlp_architectures:
                    layers = parse_architecture(architecture)
                    name = f"mlp[{'x'.join(str(width) for width in layers)}]"
                    variant = {**knobs, "hidden_layers": layers}
                    specs.append(ModelSpec(family=family, name=name, seed=seed, **variant))
            else:
                specs.append(ModelSpec(family=family, seed=seed, **knobs))
        return specs


class ExplainSection(BaseModel):
    methods: list[ExplainerMethod] = Field(
        default_factory=lambda: [ExplainerMethod.LIME, ExplainerMethod.SHAP], min_length=1
    )
    k: list[int] = Field(default_factory=lambda: [4], min_length=1, description="K values")
    samples: int = Field(default=5000, ge=1, description="Neighborhood size H")
    kernel_width: float | None = Field(default=None, gt=0)
    ridge_alpha: float = Field(default=1.0, ge=0)
    budget: int | None = Field(default=None, ge=1, description="Coalition budget for shap")
    background_rows: int | None = Field(
        default=None, ge=1, description="First N training rows as Shapley background"
    )

    @field_validator("k")
    @classmethod
    def check_k(cls, k: list[int]) -> list[int]:
        if any(value < 1 for value in k):
            raise ValueError("K values must be >= 1")
        if len(set(k)) != len(k):
            raise ValueError("K values must be distinct")
        return k

    def neighborhood(self) -> NeighborhoodConfig:
        return NeighborhoodConfig(
            n_samples=self.samples,
            kernel_width=self.kernel_width,
            ridge_alpha=self.ridge_alpha,
        )


class InstancesSection(BaseModel):
    count: int = Field(default=100, ge=1, description="First N rows of the test split")
    indices: list[int] | None = Field(default=None, description="Explicit test-split rows")

    @field_validator("indices")
    @classmethod
    def check_indices(cls, indices: list[int] | None) -> list[int] | None:
        if indices is not None and any(index < 0 for index in indices):
            raise ValueError("instance indices must be non-negative")
        return indices


class MetricsSection(BaseModel):
    repetitions: int = Field(default=50, ge=1, description="Explanations per cell (R)")
    target: float = Field(default=0.5, gt=0, lt=1, description="Boundary value y'")
    reiteration: bool = Field(default=True, description="Score reiteration similarity")

    @model_validator(mode="after")
    def check_repetitions(self) -> Self:
        if self.reiteration and self.repetitions < 2:
            raise ValueError("reiteration similarity needs metrics.repetitions >= 2")
        return self


class RunSection(BaseModel):
    seed: int = Field(default=0, ge=0, description="Base seed of the run")
    workers: int | None = Field(default=None, ge=1)
    format: ReportFormat = ReportFormat.JSON
    output: Path | None = None


class RunConfig(BaseModel):
    dataset: DatasetSection = Field(
        default_factory=lambda: DatasetSection(synthetic="drug_like", rows=1000)
    )
    model: ModelSection = Field(default_factory=ModelSection)
    explain: ExplainSection = Field(default_factory=ExplainSection)
    instances: InstancesSection = Field(default_factory=InstancesSection)
    metrics: MetricsSection = Field(default_factory=MetricsSection)
    run: RunSection = Field(default_factory=RunSection)

    def check_against(self, n_features: int) -> None:
        """
        Checks that need the dataset width.

        Raises:
            ConfigError: a K value exceeds the number of features
        """
        too_large = [k for k in self.explain.k if k > n_features]
        if too_large:
            raise ConfigError(
                f"K={too_large[0]} exceeds the number of features F={n_features}"
            )


def _is_list(annotation: Any) -> bool:
    origin = get_origin(annotation)
    if origin is list:
        return True
    if origin in (Union, types.UnionType):
        return any(_is_list(arg) for arg in get_args(annotation))
    return False


def config_keys() -> dict[str, bool]:
    """Every dotted config key, mapped to whether it takes a comma list."""
    keys = {}
    for section_name, section in RunConfig.model_fields.items():
        for field_name, field in section.annotation.model_fields.items():
            keys[f"{section_name}.{field_name}"] = _is_list(field.annotation)
    return keys


def _format_validation_error(e: ValidationError) -> str:
    problems = []
    for error in e.errors():
        where = ".".join(str(part) for part in error["loc"])
        problems.append(f"{where}: {error['msg']}" if where else error["msg"])
    return "; ".join(problems)


def build_config(values: dict[str, str]) -> RunConfig:
    """
    Build a RunConfig from flat dotted keys.

    Empty values leave the default in place.

    Raises:
        ConfigError: unknown key or invalid value
    """
    keys = config_keys()
    nested: dict[str, dict[str, Any]] = {}
    for key, raw in values.items():
        if key not in keys:
            raise ConfigError(f"unknown config key '{key}'")
        if raw is None or raw.strip() == "":
            continue
        section, field = key.split(".", 1)
        value: Any = raw.strip()
        if keys[key]:
            value = [item.strip() for item in value.split(",") if item.strip()]
        nested.setdefault(section, {})[field] = value

    dataset = nested.get("dataset")
    if dataset is not None and "path" not in dataset:
        dataset.setdefault("synthetic", "drug_like")
    try:
        return RunConfig.model_validate(nested)
    except ValidationError as e:
        raise ConfigError(f"invalid configuration: {_format_validation_error(e)}") from e


def load_config_file(path: str | Path) -> dict[str, str]:
    """
    Read a flat `key = value` config file.

    Raises:
        ConfigError: the file is missing or a line has no value
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file {path.name} not found")
    values = dotenv_values(path)
    for key, value in values.items():
        if value is None:
            raise ConfigError(f"config key '{key}' has no value")
    logger.debug(f"loaded {len(values)} keys from {path.name}")
    return {key: value for key, value in values.items() if value is not None}
