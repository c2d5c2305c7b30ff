import logging
import math
import os
from dataclasses import dataclass, fields, asdict
from pathlib import Path

from dotenv import dotenv_values, load_dotenv

from vnslab.errors import ConfigError

load_dotenv()

ROOT_DIR = Path(__file__).resolve().parent.parent
OUTPUT_ROOT = Path(os.getenv("VNS_OUTPUT_ROOT") or ROOT_DIR / "runs")
LOG_LEVEL = (os.getenv("VNS_LOG_LEVEL") or "INFO").upper()

PROFILES = ("maxwellian", "bump", "two_beam")
SAMPLING_METHODS = ("quasi", "random", "lattice")
VELOCITY_FAMILIES = ("taylor_green", "blob", "random", "zero")
VELOCITY_NORMS = ("l2", "l1", "h_half", "h1", "linf")
SCHEMES = ("if-rk2", "imex-cn")

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunConfig:
    """Full experiment description. Built from a flat `key = value` file."""
    dimension: int = 2
    points: int = 64
    box: float = 2 * math.pi
    cutoff: float | None = None

    particles: int = 10_000
    profile: str = "maxwellian"
    sampling: str = "quasi"
    particle_mass: float = 1.0
    particle_width: float = 1.0
    thermal_speed: float = 0.5
    drift_speed: float = 0.0
    bump_radius: float = 1.0

    velocity: str = "blob"
    velocity_amplitude: float = 0.1
    velocity_norm: str = "l2"
    velocity_width: float = 1.0
    velocity_modes: float = 4.0

    dt: float = 0.01
    t_end: float = 1.0
    scheme: str = "if-rk2"
    record_every: int = 10

    lipschitz_delta: float = 0.1
    picard_constant: float = 1.0
    moment_q: float = 6.0
    weight_constant: float = 1.0
    smallness_threshold: float = 0.1
    loglip_eta: float = 0.25

    monitor_besov: bool = True
    monitor_lorentz: bool = True
    monitor_loglip: bool = True

    fit_window: tuple[float, float] | None = None
    history_length: int = 64
    oracle_width: float = 0.1
    oracle_window: tuple[float, float] = (1.0, 50.0)

    seed: int = 0
    output_dir: Path | None = None

    def echo(self) -> dict:
        """Plain-type view used in summaries and reports."""
        out = asdict(self)
        for key, value in out.items():
            if isinstance(value, Path):
                out[key] = str(value)
            elif isinstance(value, tuple):
                out[key] = list(value)
        return out


# ---------------------------------------------------------------------------
# Value parsers
# ---------------------------------------------------------------------------

def parse_length(text: str) -> float:
    """Float with optional `pi` factor: `6.28`, `2pi`, `32*pi`, `pi`."""
    value = text.strip().lower()
    if value.endswith("pi"):
        factor = value[:-2].strip().rstrip("*").strip()
        return (float(factor) if factor else 1.0) * math.pi
    return float(value)


def parse_bool(text: str) -> bool:
    value = text.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def parse_window(text: str) -> tuple[float, float]:
    """`a:b` time window."""
    lo, sep, hi = text.partition(":")
    if not sep:
        raise ValueError(f"window must look like a:b, got {text!r}")
    return parse_length(lo), parse_length(hi)


def _optional(parser):
    def parse(text: str):
        if text.strip().lower() in ("", "none", "auto"):
            return None
        return parser(text)
    return parse


_PARSERS = {
    "dimension": int,
    "points": int,
    "box": parse_length,
    "cutoff": _optional(parse_length),
    "particles": int,
    "profile": str.strip,
    "sampling": str.strip,
    "particle_mass": float,
    "particle_width": parse_length,
    "thermal_speed": float,
    "drift_speed": float,
    "bump_radius": float,
    "velocity": str.strip,
    "velocity_amplitude": float,
    "velocity_norm": str.strip,
    "velocity_width": parse_length,
    "velocity_modes": parse_length,
    "dt": float,
    "t_end": float,
    "scheme": lambda s: s.strip().lower(),
    "record_every": int,
    "lipschitz_delta": float,
    "picard_constant": float,
    "moment_q": float,
    "weight_constant": float,
    "smallness_threshold": float,
    "loglip_eta": float,
    "monitor_besov": parse_bool,
    "monitor_lorentz": parse_bool,
    "monitor_loglip": parse_bool,
    "fit_window": _optional(parse_window),
    "history_length": int,
    "oracle_width": parse_length,
    "oracle_window": parse_window,
    "seed": int,
    "output_dir": _optional(Path),
}

assert set(_PARSERS) == {f.name for f in fields(RunConfig)}


def config_from_mapping(values: dict[str, str | None]) -> RunConfig:
    """Parse raw string values into a RunConfig. Unknown keys and bad values are errors."""
    parsed = {}
    ok = True
    for key, raw in values.items():
        parser = _PARSERS.get(key)
        if parser is None:
            log.error("Unknown configuration key: %s", key)
            ok = False
            continue
        try:
            parsed[key] = parser(raw or "")
        except ValueError as e:
            log.error("Bad value for %s: %s", key, e)
            ok = False
    if not ok:
        raise ConfigError("Invalid configuration; see logs for details")
    return RunConfig(**parsed)


def load_config(path: str | Path) -> RunConfig:
    """Read and validate a `key = value` experiment file."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"Configuration file not found: {path}")
    cfg = config_from_mapping(dotenv_values(path, interpolate=False, encoding="utf-8"))
    validate_config(cfg)
    return cfg


def validate_config(cfg: RunConfig) -> None:
    """Check every key. Log each problem, then raise ConfigError if any was found."""
    ok = True

    def fail(message: str, *args) -> None:
        nonlocal ok
        log.error(message, *args)
        ok = False

    if cfg.dimension not in (2, 3):
        fail("dimension must be 2 or 3, got %s", cfg.dimension)
    if cfg.points < 8 or cfg.points & (cfg.points - 1):
        fail("points must be a power of two >= 8, got %s", cfg.points)
    if not cfg.box > 0:
        fail("box must be positive, got %s", cfg.box)
    if cfg.cutoff is not None:
        n_max = math.pi * cfg.points / cfg.box if cfg.box > 0 else 0.0
        if not 0 < cfg.cutoff <= n_max:
            fail("cutoff must lie in (0, pi*N/L = %.6g], got %s", n_max, cfg.cutoff)
    if cfg.particles < 0:
        fail("particles must be >= 0, got %s", cfg.particles)
    if 0 < cfg.particles < 1000:
        fail("particles must be 0 (no kinetic phase) or >= 1000, got %s", cfg.particles)
    if cfg.profile not in PROFILES:
        fail("profile must be one of %s, got %r", PROFILES, cfg.profile)
    if cfg.sampling not in SAMPLING_METHODS:
        fail("sampling must be one of %s, got %r", SAMPLING_METHODS, cfg.sampling)
    if cfg.velocity not in VELOCITY_FAMILIES:
        fail("velocity must be one of %s, got %r", VELOCITY_FAMILIES, cfg.velocity)
    if cfg.velocity_norm not in VELOCITY_NORMS:
        fail("velocity_norm must be one of %s, got %r", VELOCITY_NORMS, cfg.velocity_norm)
    if cfg.scheme not in SCHEMES:
        fail("scheme must be one of %s, got %r", SCHEMES, cfg.scheme)

    positive = (
        "particle_mass", "particle_width", "thermal_speed", "bump_radius",
        "velocity_width", "velocity_modes", "dt", "t_end", "lipschitz_delta",
        "picard_constant", "smallness_threshold", "oracle_width",
    )
    for name in positive:
        value = getattr(cfg, name)
        if not value > 0:
            fail("%s must be positive, got %s", name, value)
    if cfg.velocity_amplitude < 0:
        fail("velocity_amplitude must be >= 0, got %s", cfg.velocity_amplitude)
    if cfg.drift_speed < 0:
        fail("drift_speed must be >= 0, got %s", cfg.drift_speed)
    if cfg.weight_constant < 0:
        fail("weight_constant must be >= 0, got %s", cfg.weight_constant)
    if cfg.record_every < 1:
        fail("record_every must be >= 1, got %s", cfg.record_every)
    if cfg.history_length < 1:
        fail("history_length must be >= 1, got %s", cfg.history_length)
    if cfg.moment_q <= cfg.dimension:
        fail("moment_q must exceed the dimension for C_q to be finite, got %s", cfg.moment_q)
    if not 0 < cfg.loglip_eta < 0.5:
        fail("loglip_eta must lie in (0, 1/2), got %s", cfg.loglip_eta)
    for name in ("fit_window", "oracle_window"):
        window = getattr(cfg, name)
        if window is not None and not 0 <= window[0] < window[1]:
            fail("%s must satisfy 0 <= a < b, got %s", name, window)

    if not ok:
        raise ConfigError("Invalid configuration; see logs for details")
    log.info("Configuration validated successfully")
