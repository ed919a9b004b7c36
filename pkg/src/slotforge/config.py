"""Run configuration for induction sessions.

One flat dataclass covers the knobs the paper leaves open (cluster count,
similarity thresholds, scale factors) plus artifact plumbing (provider mode,
method ablation switches). Defaults follow the pinned conventions documented
in README.md.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict
from typing import Any

METHODS = ("random", "ai-only", "ai-only+bl", "ai-only+bl+sc")

_METHOD_ALIASES = {
    "random": "random",
    "ai-only": "ai-only",
    "ai-only+bl": "ai-only+bl",
    "ai-only+bleach": "ai-only+bl",
    "ai-only+bl+sc": "ai-only+bl+sc",
    "ai-only+bleach+scale": "ai-only+bl+sc",
}

DEFAULT_SCALE_FACTOR = 10.0


def canonical_method(name: str) -> str:
    key = name.strip().lower()
    if key not in _METHOD_ALIASES:
        raise ValueError(f"unknown method {name!r}; expected one of {sorted(set(_METHOD_ALIASES))}")
    return _METHOD_ALIASES[key]


@dataclass
class ProviderSpec:
    """Which implementation backs the ner/qg/reader roles.

    mode: "builtin" (deterministic rule-based), "fixture" (recorded
    request/response jsonl under `path`), or "http" (live endpoint at `url`).
    """

    mode: str = "builtin"
    path: str | None = None
    url: str | None = None
    timeout: float = 10.0
    max_attempts: int = 3
    max_in_flight: int = 4

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ProviderSpec":
        return cls(**d)


@dataclass
class InductionConfig:
    k: int | None = None            # cluster count; defaults to |slot_inventory|
    seed: int = 1
    method: str = "ai-only+bl+sc"
    tau: float = 0.35               # document-representative cosine threshold
    top_k: int = 5                  # global representatives per cluster
    theta: float = 0.8              # fuzzy-match threshold for evaluation
    scale: dict[str, float] = field(default_factory=dict)
    reader_threshold: float = 0.2
    providers: ProviderSpec = field(default_factory=ProviderSpec)

    def __post_init__(self) -> None:
        self.method = canonical_method(self.method)

    @property
    def use_bleach(self) -> bool:
        return self.method in ("ai-only+bl", "ai-only+bl+sc")

    @property
    def use_scale(self) -> bool:
        return self.method == "ai-only+bl+sc"

    @property
    def use_random_clustering(self) -> bool:
        return self.method == "random"

    def effective_scale(self) -> dict[str, float]:
        return dict(self.scale) if self.use_scale else {}

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["providers"] = self.providers.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "InductionConfig":
        d = dict(d)
        providers = d.pop("providers", None)
        cfg = cls(**d)
        if providers is not None:
            cfg.providers = ProviderSpec.from_dict(providers)
        return cfg


def load_config_file(path: str) -> dict[str, Any]:
    """Parse the flat key=value config format.

    Lines: `key = value`, '#' comments, blank lines ignored. Values are JSON
    when they parse as JSON (numbers, lists, objects), raw strings otherwise.
    `scale.<word> = <factor>` entries accumulate into the scale map.
    """
    out: dict[str, Any] = {}
    scale: dict[str, float] = {}
    with open(path, "r", encoding="utf-8") as f:
        for raw in f:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"bad config line (expected key = value): {line!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            try:
                parsed: Any = json.loads(value)
            except json.JSONDecodeError:
                parsed = value
            if key.startswith("scale."):
                scale[key[len("scale."):]] = float(parsed)
            else:
                out[key] = parsed
    if scale:
        out["scale"] = scale
    return out
