"""Run configuration: INI-style file with sections, overridable by CLI flags.

Validation is all-at-once: every invalid field is reported by name in a
single ConfigurationError rather than failing one field at a time.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

from .data.pipeline import DEFAULT_FEATURES
from .errors import ConfigurationError
from .grunet.training import TrialConfig
from .metaheuristics import DeConfig, GaConfig, ParamSpec, PsoConfig, SearchSpace

__all__ = ["RunConfig", "default_search_space", "load_config", "OPTIMIZERS"]

OPTIMIZERS = ("de", "ga", "pso", "manual")

# Wide enough to cover every regime the model responds to: tiny-to-huge
# batches, quick-to-exhaustive epoch counts, the whole usable Adam lr range.
SEARCH_BOUNDS = {
    "batch_size": (16, 256, "integer"),
    "epochs": (10, 1000, "integer"),
    "learning_rate": (1e-4, 0.5, "continuous"),
}


def default_search_space() -> SearchSpace:
    return SearchSpace(
        tuple(ParamSpec(name, lo, hi, kind) for name, (lo, hi, kind) in SEARCH_BOUNDS.items())
    )


def _midpoint_trial(space: SearchSpace) -> TrialConfig:
    values = {p.name: (p.lower + p.upper) / 2.0 for p in space.params}
    return TrialConfig(
        batch_size=round(values["batch_size"]),
        epochs=round(values["epochs"]),
        learning_rate=values["learning_rate"],
    )


@dataclass
class RunConfig:
    csv_path: Path | None = None
    synthetic_hours: int | None = None
    synthetic_noise: float = 1.0
    features: tuple[str, ...] = DEFAULT_FEATURES
    ratios: tuple[float, float, float] = (0.70, 0.15, 0.15)
    space: SearchSpace = field(default_factory=default_search_space)
    optimizer: str = "de"
    pop_size: int = 10
    generations: int = 15
    epoch_cap: int | None = 50
    final_epoch_cap: int | None = None
    f_scale: float = 0.8
    cr: float = 0.9
    ga_overrides: dict = field(default_factory=dict)
    pso_overrides: dict = field(default_factory=dict)
    manual_trial: TrialConfig | None = None
    methods: tuple[str, ...] = ("manual", "de")
    seed: int = 0
    out_dir: Path = Path("runs/latest")
    workers: int = 1

    def de_config(self) -> DeConfig:
        return DeConfig(
            f_scale=self.f_scale,
            cr=self.cr,
            pop_size=self.pop_size,
            max_generations=self.generations,
            seed=self.seed,
        )

    def ga_config(self) -> GaConfig:
        return GaConfig(
            pop_size=self.pop_size,
            max_generations=self.generations,
            seed=self.seed,
            **self.ga_overrides,
        )

    def pso_config(self) -> PsoConfig:
        return PsoConfig(
            swarm_size=self.pop_size,
            max_iterations=self.generations,
            seed=self.seed,
            **self.pso_overrides,
        )

    def manual_or_midpoint(self) -> TrialConfig:
        return self.manual_trial if self.manual_trial is not None else _midpoint_trial(self.space)

    def snapshot(self) -> dict:
        """JSON-ready view of every setting, for the run manifest."""
        return {
            "csv_path": str(self.csv_path) if self.csv_path else None,
            "synthetic_hours": self.synthetic_hours,
            "synthetic_noise": self.synthetic_noise,
            "features": list(self.features),
            "ratios": list(self.ratios),
            "space": [
                {"name": p.name, "lower": p.lower, "upper": p.upper, "kind": p.kind}
                for p in self.space.params
            ],
            "optimizer": self.optimizer,
            "pop_size": self.pop_size,
            "generations": self.generations,
            "epoch_cap": self.epoch_cap,
            "final_epoch_cap": self.final_epoch_cap,
            "f_scale": self.f_scale,
            "cr": self.cr,
            "ga_overrides": self.ga_overrides,
            "pso_overrides": self.pso_overrides,
            "manual_trial": (
                {
                    "batch_size": self.manual_trial.batch_size,
                    "epochs": self.manual_trial.epochs,
                    "learning_rate": self.manual_trial.learning_rate,
                }
                if self.manual_trial
                else None
            ),
            "methods": list(self.methods),
            "seed": self.seed,
            "out_dir": str(self.out_dir),
            "workers": self.workers,
        }


def _parse_pair(text: str) -> tuple[float, float]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise ValueError(f"expected 'low, high', got {text!r}")
    return float(parts[0]), float(parts[1])


_GA_FIELDS = {
    "tournament_size": int,
    "crossover_rate": float,
    "blend_alpha": float,
    "mutation_rate": float,
    "mutation_sigma": float,
    "sigma_decay": float,
    "elite_count": int,
}
_PSO_FIELDS = {
    "inertia": float,
    "cognitive": float,
    "social": float,
    "velocity_clamp": float,
}


def load_config(path: str | Path | None = None, overrides: dict | None = None) -> RunConfig:
    """Assemble a RunConfig from an optional INI file plus flag overrides
    (flags win). Raises one ConfigurationError listing every bad field."""
    cfg = RunConfig()
    problems: list[str] = []

    def attempt(field_name: str, fn) -> None:
        try:
            fn()
        except (ValueError, ConfigurationError) as exc:
            problems.append(f"{field_name}: {exc}")

    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise ConfigurationError(f"config file not found: {path}")
        parser.read(path)

    def take(section: str, option: str, fn) -> None:
        if parser.has_option(section, option):
            attempt(f"[{section}] {option}", lambda: fn(parser.get(section, option)))

    def set_csv(v: str) -> None:
        cfg.csv_path = Path(v)

    def set_features(v: str) -> None:
        cfg.features = tuple(p.strip() for p in v.split(",") if p.strip())

    def set_ratios(v: str) -> None:
        parts = [float(p) for p in v.split(",")]
        if len(parts) != 3:
            raise ValueError(f"expected three ratios, got {len(parts)}")
        cfg.ratios = (parts[0], parts[1], parts[2])

    take("data", "csv", set_csv)
    take("data", "synthetic_hours", lambda v: setattr(cfg, "synthetic_hours", int(v)))
    take("data", "synthetic_noise", lambda v: setattr(cfg, "synthetic_noise", float(v)))
    take("data", "features", set_features)
    take("data", "ratios", set_ratios)

    bounds = dict(SEARCH_BOUNDS)
    for name in list(bounds):
        if parser.has_option("search", name):
            text = parser.get("search", name)

            def apply_bound(n=name, t=text) -> None:
                lo, hi = _parse_pair(t)
                bounds[n] = (lo, hi, bounds[n][2])

            attempt(f"[search] {name}", apply_bound)
    attempt(
        "[search]",
        lambda: setattr(
            cfg,
            "space",
            SearchSpace(tuple(ParamSpec(n, lo, hi, kind) for n, (lo, hi, kind) in bounds.items())),
        ),
    )

    take("tune", "optimizer", lambda v: setattr(cfg, "optimizer", v.strip().lower()))
    take("tune", "pop_size", lambda v: setattr(cfg, "pop_size", int(v)))
    take("tune", "generations", lambda v: setattr(cfg, "generations", int(v)))
    take("tune", "epoch_cap", lambda v: setattr(cfg, "epoch_cap", None if v.strip().lower() == "none" else int(v)))
    take("tune", "final_epoch_cap", lambda v: setattr(cfg, "final_epoch_cap", None if v.strip().lower() == "none" else int(v)))

    take("de", "f_scale", lambda v: setattr(cfg, "f_scale", float(v)))
    take("de", "cr", lambda v: setattr(cfg, "cr", float(v)))
    for name, conv in _GA_FIELDS.items():
        take("ga", name, lambda v, n=name, c=conv: cfg.ga_overrides.__setitem__(n, c(v)))
    for name, conv in _PSO_FIELDS.items():
        take("pso", name, lambda v, n=name, c=conv: cfg.pso_overrides.__setitem__(n, c(v)))

    manual: dict = {}
    take("manual", "batch_size", lambda v: manual.__setitem__("batch_size", int(v)))
    take("manual", "epochs", lambda v: manual.__setitem__("epochs", int(v)))
    take("manual", "learning_rate", lambda v: manual.__setitem__("learning_rate", float(v)))

    take("compare", "methods", lambda v: setattr(cfg, "methods", tuple(p.strip().lower() for p in v.split(",") if p.strip())))

    take("run", "seed", lambda v: setattr(cfg, "seed", int(v)))
    take("run", "out_dir", lambda v: setattr(cfg, "out_dir", Path(v)))
    take("run", "workers", lambda v: setattr(cfg, "workers", int(v)))

    overrides = overrides or {}
    for key, value in overrides.items():
        if value is None:
            continue
        if key == "manual_batch_size":
            manual["batch_size"] = value
        elif key == "manual_epochs":
            manual["epochs"] = value
        elif key == "manual_learning_rate":
            manual["learning_rate"] = value
        elif key in ("csv_path", "out_dir"):
            setattr(cfg, key, Path(value))
        elif key == "features":
            cfg.features = tuple(value)
        elif key == "ratios":
            cfg.ratios = tuple(value)
        elif key == "methods":
            cfg.methods = tuple(value)
        elif hasattr(cfg, key):
            setattr(cfg, key, value)
        else:
            problems.append(f"{key}: unknown configuration field")

    if manual:
        missing = [k for k in ("batch_size", "epochs", "learning_rate") if k not in manual]
        if missing:
            problems.append(f"[manual]: missing {', '.join(missing)}")
        else:
            attempt("[manual]", lambda: setattr(cfg, "manual_trial", TrialConfig(**manual)))

    # cross-field checks
    if cfg.csv_path is not None and cfg.synthetic_hours is not None:
        problems.append("data source: csv and synthetic_hours are mutually exclusive")
    if cfg.optimizer not in OPTIMIZERS:
        problems.append(f"optimizer: {cfg.optimizer!r} not one of {OPTIMIZERS}")
    for m in cfg.methods:
        if m not in OPTIMIZERS:
            problems.append(f"methods: {m!r} not one of {OPTIMIZERS}")
    if cfg.pop_size < 4:
        problems.append(f"pop_size: must be >= 4, got {cfg.pop_size}")
    if cfg.generations < 0:
        problems.append(f"generations: must be >= 0, got {cfg.generations}")
    if cfg.workers < 1:
        problems.append(f"workers: must be >= 1, got {cfg.workers}")
    if cfg.seed < 0:
        problems.append(f"seed: must be >= 0, got {cfg.seed}")
    if cfg.synthetic_hours is not None and cfg.synthetic_hours < 27:
        problems.append(f"synthetic_hours: must be >= 27, got {cfg.synthetic_hours}")
    if any(r < 0 for r in cfg.ratios) or abs(sum(cfg.ratios) - 1.0) > 1e-9:
        problems.append(f"ratios: must be non-negative and sum to 1, got {cfg.ratios}")

    if problems:
        raise ConfigurationError("invalid configuration:\n  " + "\n  ".join(problems))
    return cfg
