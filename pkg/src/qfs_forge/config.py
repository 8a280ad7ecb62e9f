"""Run configuration: one JSON file driving every CLI subcommand."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from .backends import (
    API_KEY_ENV,
    CompletionBackend,
    CompletionParams,
    LiveBackend,
    MockBackend,
    QUERY_GEN_PARAMS,
    SUMMARIZATION_PARAMS,
)
from .corpus import MODES
from .prompts import PromptLabels, PromptSpec, default_spec, load_example
from .unify import QUERY_FORMATS


class ConfigError(ValueError):
    pass


@dataclass
class BackendConfig:
    kind: str = "mock"  # mock | live
    endpoint: str = ""
    script: str = ""  # path to a JSON list of canned completions
    seed: int = 0
    timeout: float = 60.0
    params: CompletionParams | None = None

    def validate(self) -> None:
        if self.kind not in ("mock", "live"):
            raise ConfigError(f"backend.kind must be mock or live, got {self.kind!r}")
        if self.kind == "live":
            if not self.endpoint:
                raise ConfigError("live backend requires backend.endpoint")
            if not os.environ.get(API_KEY_ENV):
                raise ConfigError(
                    f"live backend requires the {API_KEY_ENV} environment variable"
                )

    def build(self) -> CompletionBackend:
        self.validate()
        if self.kind == "live":
            return LiveBackend(self.endpoint, timeout=self.timeout)
        script = None
        if self.script:
            with open(self.script, encoding="utf-8") as handle:
                script = json.load(handle)
            if not isinstance(script, list) or not all(isinstance(s, str) for s in script):
                raise ConfigError(f"backend.script {self.script!r} must be a JSON list of strings")
        return MockBackend(script=script, seed=self.seed)


@dataclass
class RunConfig:
    backend: BackendConfig = field(default_factory=BackendConfig)
    mode: str = "wh"
    parallelism: int = 1
    retries: int = 2
    failure_ceiling: float = 0.0
    failure_action: str = "drop"  # or "repair"
    max_document_tokens: int = 3000
    query_format: str = "natural"
    ntp_numerator: str = "occurrences"
    recall_only: bool = False
    # prompt overrides
    instruction: str = ""
    example_path: str = ""
    labels: dict = field(default_factory=dict)
    # composition
    overlap_threshold: float = 50.0
    token_budget: int = 250
    on_overflow: str = "truncate"
    # optional path defaults, overridable on the command line
    paths: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.parallelism < 1:
            raise ConfigError("parallelism must be >= 1")
        if self.retries < 0:
            raise ConfigError("retries must be >= 0")
        if not 0 <= self.failure_ceiling <= 1:
            raise ConfigError("failure_ceiling must be a rate in [0, 1]")
        if self.failure_action not in ("drop", "repair"):
            raise ConfigError("failure_action must be 'drop' or 'repair'")
        if self.query_format not in QUERY_FORMATS:
            raise ConfigError(f"query_format must be one of {QUERY_FORMATS}")
        if self.ntp_numerator not in ("occurrences", "types"):
            raise ConfigError("ntp_numerator must be 'occurrences' or 'types'")

    def prompt_spec(self, domain: str) -> PromptSpec:
        labels = PromptLabels(**self.labels) if self.labels else None
        example = None
        if self.example_path:
            example = load_example(self.example_path, self.mode)
        return default_spec(
            domain,
            self.mode,
            instruction=self.instruction or None,
            labels=labels,
            example=example,
        )

    def completion_params(self) -> CompletionParams:
        return self.backend.params or QUERY_GEN_PARAMS

    def summarization_params(self) -> CompletionParams:
        return self.backend.params or SUMMARIZATION_PARAMS

    def path(self, key: str, override: str | None) -> str:
        value = override or self.paths.get(key, "")
        if not value:
            raise ConfigError(f"no {key!r} path given (flag or config paths.{key})")
        return value


def _backend_from_dict(raw: dict) -> BackendConfig:
    params = None
    if raw.get("params"):
        p = raw["params"]
        params = CompletionParams(
            max_tokens=p.get("max_tokens", 256),
            temperature=p.get("temperature", 0.0),
            top_p=p.get("top_p", 1.0),
            stop_sequences=tuple(p.get("stop", ())),
        )
    return BackendConfig(
        kind=raw.get("kind", "mock"),
        endpoint=raw.get("endpoint", ""),
        script=raw.get("script", ""),
        seed=int(raw.get("seed", 0)),
        timeout=float(raw.get("timeout", 60.0)),
        params=params,
    )


def load_config(path: str | None) -> RunConfig:
    """Read the JSON config file; a missing path yields the defaults."""
    if not path:
        config = RunConfig()
        config.validate()
        return config
    try:
        with open(path, encoding="utf-8") as handle:
            raw = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path} must be a JSON object")

    known = {
        "backend", "mode", "parallelism", "retries", "failure_ceiling",
        "failure_action", "max_document_tokens", "query_format", "ntp_numerator",
        "recall_only", "instruction", "example_path", "labels",
        "overlap_threshold", "token_budget", "on_overflow", "paths",
    }
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {unknown}")

    config = RunConfig(
        backend=_backend_from_dict(raw.get("backend", {})),
        mode=raw.get("mode", "wh"),
        parallelism=int(raw.get("parallelism", 1)),
        retries=int(raw.get("retries", 2)),
        failure_ceiling=float(raw.get("failure_ceiling", 0.0)),
        failure_action=raw.get("failure_action", "drop"),
        max_document_tokens=int(raw.get("max_document_tokens", 3000)),
        query_format=raw.get("query_format", "natural"),
        ntp_numerator=raw.get("ntp_numerator", "occurrences"),
        recall_only=bool(raw.get("recall_only", False)),
        instruction=raw.get("instruction", ""),
        example_path=raw.get("example_path", ""),
        labels=raw.get("labels", {}),
        overlap_threshold=float(raw.get("overlap_threshold", 50.0)),
        token_budget=int(raw.get("token_budget", 250)),
        on_overflow=raw.get("on_overflow", "truncate"),
        paths=raw.get("paths", {}),
    )
    config.validate()
    return config
