"""Virtual laboratory: shot-by-shot detection with a known noise matrix.

A run draws, for each of the six channels, N Bernoulli detections with
per-shot probability

    p = clip(eta * exposure * rate, 0, 1),

where the rate comes from the forward model, ``exposure`` is the short
evolution time per shot and ``eta`` a detection-efficiency calibration.  The
first-order forward model is only trusted for small per-shot probabilities,
so configurations with any unclamped p above 0.2 are rejected outright.
Channels whose true rate is negative (possible when the underlying matrix is
not PSD) are clamped to p = 0 and flagged rather than rejected, so the
non-complete-positivity inconsistency can be driven through the pipeline and
observed.

Reproducibility contract: the master seed is split into independent
per-channel substreams, so identical configurations produce bit-identical
runs and channel draws are order-insensitive.  Persisted artifacts contain no
wall-clock data for the same reason.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, replace

import numpy as np

from .inversion import InversionResult, invert_noisy
from .kossakowski import KossakowskiMatrix
from .probe import CHANNELS, ProbeMatrix, forward
from .scattering import coefficients

MAX_PER_SHOT_PROBABILITY = 0.2

RUN_SCHEMA_VERSION = 1
CSV_HEADER = "label,N,k,p_hat,sigma"


class ConfigError(ValueError):
    """Invalid experiment configuration; the message lists the violated guards."""


@dataclass(frozen=True)
class ExperimentConfig:
    true_c: KossakowskiMatrix
    g: float
    phase: float
    exposure: float
    calibration: float
    shots_per_channel: int
    seed: int

    def physics_key(self) -> tuple:
        """The fields that must match for runs to be poolable."""
        return (self.g, self.phase, self.exposure, self.calibration, self.true_c)

    def rates(self) -> np.ndarray:
        return forward(self.true_c, coefficients(self.g), self.phase).rates

    def per_shot_probabilities(self) -> tuple[np.ndarray, np.ndarray]:
        """(clamped probabilities, unclamped values); validates the config."""
        problems = []
        if not 0.0 < self.calibration <= 1.0:
            problems.append(f"calibration must be in (0, 1], got {self.calibration}")
        if self.exposure <= 0:
            problems.append(f"exposure must be positive, got {self.exposure}")
        if self.shots_per_channel <= 0:
            problems.append(f"shots_per_channel must be positive, got {self.shots_per_channel}")
        if problems:
            raise ConfigError("; ".join(problems))
        unclamped = self.calibration * self.exposure * self.rates()
        too_large = [
            f"{label} (p = {p:.4g})"
            for label, p in zip(CHANNELS, unclamped)
            if p > MAX_PER_SHOT_PROBABILITY
        ]
        if too_large:
            raise ConfigError(
                "per-shot probability exceeds the first-order validity guard "
                f"{MAX_PER_SHOT_PROBABILITY}: " + ", ".join(too_large)
            )
        return np.clip(unclamped, 0.0, 1.0), unclamped

    def to_dict(self) -> dict:
        return {
            "true_c": self.true_c.to_dict(),
            "g": self.g,
            "phase": self.phase,
            "exposure": self.exposure,
            "calibration": self.calibration,
            "shots_per_channel": self.shots_per_channel,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        return cls(
            true_c=KossakowskiMatrix.from_dict(data["true_c"]),
            g=float(data["g"]),
            phase=float(data["phase"]),
            exposure=float(data["exposure"]),
            calibration=float(data["calibration"]),
            shots_per_channel=int(data["shots_per_channel"]),
            seed=int(data["seed"]),
        )

    def hash(self) -> str:
        payload = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()


@dataclass(frozen=True)
class ExperimentRun:
    """Aggregated detection counts for one seeded run.

    ``flagged_channels`` lists channels whose true rate was negative and whose
    per-shot probability was clamped to zero (the signature of a non-PSD
    underlying matrix reaching the detector).
    """

    config: ExperimentConfig
    detections: tuple[int, ...]
    flagged_channels: tuple[str, ...]

    @property
    def trials(self) -> int:
        return self.config.shots_per_channel

    @property
    def p_hat(self) -> np.ndarray:
        return np.array(self.detections, dtype=float) / self.trials

    @property
    def sigma(self) -> np.ndarray:
        p = self.p_hat
        return np.sqrt(p * (1.0 - p) / self.trials)

    def to_dict(self) -> dict:
        return {
            "schema_version": RUN_SCHEMA_VERSION,
            "config": self.config.to_dict(),
            "config_hash": self.config.hash(),
            "channels": [
                {
                    "label": label,
                    "N": self.trials,
                    "k": int(k),
                    "p_hat": float(p),
                    "sigma": float(s),
                }
                for label, k, p, s in zip(CHANNELS, self.detections, self.p_hat, self.sigma)
            ],
            "flagged_channels": list(self.flagged_channels),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentRun":
        config = ExperimentConfig.from_dict(data["config"])
        channels = {ch["label"]: ch for ch in data["channels"]}
        detections = tuple(int(channels[label]["k"]) for label in CHANNELS)
        return cls(
            config=config,
            detections=detections,
            flagged_channels=tuple(data.get("flagged_channels", [])),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        for label, k, p, s in zip(CHANNELS, self.detections, self.p_hat, self.sigma):
            lines.append(f"{label},{self.trials},{int(k)},{float(p)!r},{float(s)!r}")
        return "\n".join(lines) + "\n"


def run(config: ExperimentConfig) -> ExperimentRun:
    """Simulate one run: six independent binomial draws from split substreams."""
    probabilities, unclamped = config.per_shot_probabilities()
    flagged = tuple(
        label for label, raw in zip(CHANNELS, unclamped) if raw < 0.0
    )
    streams = np.random.SeedSequence(config.seed).spawn(len(CHANNELS))
    detections = tuple(
        int(np.random.default_rng(stream).binomial(config.shots_per_channel, p))
        for stream, p in zip(streams, probabilities)
    )
    return ExperimentRun(config=config, detections=detections, flagged_channels=flagged)


def estimate(
    runs: ExperimentRun | list[ExperimentRun],
    m: ProbeMatrix,
    z: float = 3.0,
    bootstrap: int = 10_000,
    seed: int = 0,
) -> InversionResult:
    """Pool one or more runs and push the empirical rates through the inversion.

    All runs must share the physics configuration (coupling, phase, exposure,
    calibration and true matrix); seeds and shot counts may differ.  Empirical
    per-shot probabilities are rescaled to rates by 1/(eta * exposure).
    """
    if isinstance(runs, ExperimentRun):
        runs = [runs]
    if not runs:
        raise ValueError("estimate needs at least one run")
    key = runs[0].config.physics_key()
    if any(r.config.physics_key() != key for r in runs[1:]):
        raise ValueError("runs have mixed configurations and cannot be pooled")

    total_n = sum(r.trials for r in runs)
    total_k = np.sum([r.detections for r in runs], axis=0)
    p_hat = total_k / total_n
    sigma_p = np.sqrt(p_hat * (1.0 - p_hat) / total_n)

    scale = runs[0].config.calibration * runs[0].config.exposure
    return invert_noisy(p_hat / scale, sigma_p / scale, m, z=z, bootstrap=bootstrap, seed=seed)


def save_run(experiment_run: ExperimentRun, directory) -> tuple[str, str]:
    """Write run.json and run.csv into ``directory``; returns both paths."""
    from pathlib import Path

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    json_path = directory / "run.json"
    csv_path = directory / "run.csv"
    json_path.write_text(experiment_run.to_json())
    csv_path.write_text(experiment_run.to_csv())
    return str(json_path), str(csv_path)


def load_run(path) -> ExperimentRun:
    from pathlib import Path

    data = json.loads(Path(path).read_text())
    return ExperimentRun.from_dict(data)


def with_seed(config: ExperimentConfig, seed: int) -> ExperimentConfig:
    """Convenience for repetition sweeps."""
    return replace(config, seed=seed)
