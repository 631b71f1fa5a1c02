"""INI-style scenario files and the model/sweep token grammar.

Sections and keys (units in the key names; dB-scaled keys end in _db/_dbm):

    [radio]       tx_power_dbm, noise_power_dbm, sinr_threshold_db,
                  ref_attenuation_db, path_loss_exponent
    [deployment]  avg_spacing_m or density_per_m2 (exactly one),
                  link_length_m, sim_radius_m (optional)
    [antenna]     pattern = omni | sector; beamwidth_rad (sector only)
    [channel]     fading = rayleigh | deterministic;
                  blockage_rate_per_m (optional, 0 disables blockage)
    [accuracy]    optional: xi = observed | <float in [0,1]>;
                  confidence (default 0.95)
    [sweep]       variable = prm_range | ibm_range | d_t | theta;
                  grid = v1,v2,... or start:stop:step (inclusive);
                  models = comma-separated model tokens;
                  n_trials (default 100000), seed (default 1)

Model tokens: ``phym``; ``ibm``/``prm`` bare (range taken from the swept
grid; only valid under a range sweep); ``ibm:<metres>``/``prm:<metres>``;
``prm:delta=<factor>`` for a guard zone of ``(1+factor)*link_length``; and
``zeta`` or ``<k>*zeta`` as the range expression, meaning the largest
zero-false-alarm protocol range for the config (scaled by ``k``).

Validation collects every problem before failing, with file and line
numbers, so one round trip fixes all mistakes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (AntennaModel, ChannelModel, DeploymentParams, ModelSpec,
                   RadioParams, ScenarioConfig)

__all__ = [
    "ConfigError",
    "SweepSpec",
    "bundled_config_path",
    "parse_config",
    "parse_config_text",
    "parse_model_token",
    "resolve_model_token",
    "parse_grid",
]

_SECTIONS = ("radio", "deployment", "antenna", "channel", "accuracy", "sweep")
SWEEP_VARIABLES = ("prm_range", "ibm_range", "d_t", "theta")

DEFAULT_SWEEP_TRIALS = 100_000
DEFAULT_SEED = 1


class ConfigError(ValueError):
    """All problems found in a config file, one per line of the message."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("\n".join(self.problems))


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: the variable, its grid, the models, and the run size."""

    variable: str
    grid: tuple[float, ...]
    model_tokens: tuple[str, ...]
    n_trials: int = DEFAULT_SWEEP_TRIALS
    seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        if self.variable not in SWEEP_VARIABLES:
            raise ValueError(f"unknown sweep variable {self.variable!r}")
        if not self.grid:
            raise ValueError("sweep grid is empty")
        if not self.model_tokens:
            raise ValueError("sweep needs at least one model token")
        if self.n_trials < 1:
            raise ValueError("n_trials must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be >= 0")


class _RawConfig:
    """Parsed key/value pairs with their source lines, prior to validation."""

    def __init__(self, origin: str):
        self.origin = origin
        self.values: dict[tuple[str, str], tuple[str, int]] = {}
        self.problems: list[str] = []

    def complain(self, line_no: int | None, section: str | None,
                 key: str | None, message: str) -> None:
        where = self.origin if line_no is None else f"{self.origin}:{line_no}"
        ctx = ""
        if section:
            ctx = f" [{section}]" + (f" {key}" if key else "")
        self.problems.append(f"{where}:{ctx} {message}")

    def get(self, section: str, key: str) -> str | None:
        entry = self.values.get((section, key))
        return None if entry is None else entry[0]

    def line(self, section: str, key: str) -> int | None:
        entry = self.values.get((section, key))
        return None if entry is None else entry[1]


def _strip_comment(line: str) -> str:
    for marker in ("#", ";"):
        pos = line.find(marker)
        if pos == 0 or (pos > 0 and line[pos - 1] in " \t"):
            line = line[:pos]
    return line.strip()


def _read_raw(text: str, origin: str) -> _RawConfig:
    raw = _RawConfig(origin)
    section = None
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = _strip_comment(line)
        if not stripped:
            continue
        if stripped.startswith("[") and stripped.endswith("]"):
            section = stripped[1:-1].strip().lower()
            if section not in _SECTIONS:
                raw.complain(line_no, None, None,
                             f"unknown section [{section}] (expected one of "
                             + ", ".join(_SECTIONS) + ")")
                section = None
            continue
        if "=" not in stripped:
            raw.complain(line_no, section, None,
                         f"expected 'key = value', got {stripped!r}")
            continue
        if section is None:
            raw.complain(line_no, None, None,
                         f"key outside any section: {stripped!r}")
            continue
        key, _, value = stripped.partition("=")
        key = key.strip().lower()
        value = value.strip()
        if (section, key) in raw.values:
            raw.complain(line_no, section, key, "duplicate key")
            continue
        raw.values[(section, key)] = (value, line_no)
    return raw


_KNOWN_KEYS = {
    "radio": {"tx_power_dbm", "noise_power_dbm", "sinr_threshold_db",
              "ref_attenuation_db", "path_loss_exponent"},
    "deployment": {"avg_spacing_m", "density_per_m2", "link_length_m",
                   "sim_radius_m"},
    "antenna": {"pattern", "beamwidth_rad"},
    "channel": {"fading", "blockage_rate_per_m"},
    "accuracy": {"xi", "confidence"},
    "sweep": {"variable", "grid", "models", "n_trials", "seed"},
}


def _get_float(raw: _RawConfig, section: str, key: str,
               required: bool = True) -> float | None:
    text = raw.get(section, key)
    if text is None:
        if required:
            raw.complain(None, section, key, "missing required key")
        return None
    try:
        value = float(text)
    except ValueError:
        raw.complain(raw.line(section, key), section, key,
                     f"not a number: {text!r}")
        return None
    if not math.isfinite(value):
        raw.complain(raw.line(section, key), section, key,
                     f"must be finite, got {text!r}")
        return None
    return value


def _get_int(raw: _RawConfig, section: str, key: str) -> int | None:
    text = raw.get(section, key)
    if text is None:
        return None
    try:
        return int(text)
    except ValueError:
        raw.complain(raw.line(section, key), section, key,
                     f"not an integer: {text!r}")
        return None


def parse_grid(text: str) -> tuple[float, ...]:
    """Parse ``v1,v2,...`` or an inclusive ``start:stop:step`` range."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"range grid must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0.0 or stop < start:
            raise ValueError(f"need stop >= start and step > 0 in {text!r}")
        n = int(round((stop - start) / step))
        if abs(start + n * step - stop) > 1e-9 * max(1.0, abs(stop)):
            raise ValueError(f"step does not divide the range in {text!r}")
        return tuple(start + k * step for k in range(n + 1))
    values = tuple(float(p) for p in text.split(",") if p.strip())
    if not values:
        raise ValueError("grid is empty")
    return values


def parse_model_token(token: str) -> str:
    """Validate a model token's grammar, returning its canonical form."""
    t = token.strip().lower()
    if t == "phym":
        return t
    kind, sep, arg = t.partition(":")
    if kind not in ("ibm", "prm"):
        raise ValueError(f"unknown model {token!r} (expected phym, ibm or prm)")
    if not sep:
        return kind
    arg = arg.strip()
    if arg.startswith("delta="):
        if kind != "prm":
            raise ValueError(f"guard factors only apply to prm, got {token!r}")
        delta = float(arg[len("delta="):])
        if delta < 0.0:
            raise ValueError(f"guard factor must be >= 0 in {token!r}")
        return f"prm:delta={delta!r}"
    if arg.endswith("zeta"):
        head = arg[:-len("zeta")].rstrip("*").strip()
        factor = 1.0 if not head else float(head)
        if factor <= 0.0:
            raise ValueError(f"zeta multiple must be positive in {token!r}")
        return f"{kind}:{factor!r}*zeta"
    radius = float(arg)
    if radius <= 0.0:
        raise ValueError(f"range must be positive in {token!r}")
    return f"{kind}:{radius!r}"


def resolve_model_token(token: str, config: ScenarioConfig,
                        grid_value: float | None = None,
                        swept_kind: str | None = None) -> ModelSpec:
    """Turn a canonical token into a concrete :class:`ModelSpec`.

    Bare ``ibm``/``prm`` take ``grid_value`` as their range (any model left
    rangeless rides the swept range grid).  ``zeta`` expressions resolve
    against the config's zero-false-alarm radius, which requires sector
    antennas and a deterministic channel.
    """
    t = parse_model_token(token)
    if t == "phym":
        return ModelSpec.phym()
    kind, _, arg = t.partition(":")
    if not arg:
        if grid_value is None or swept_kind not in ("prm_range", "ibm_range"):
            raise ValueError(
                f"model {token!r} has no range; give one explicitly or sweep "
                "prm_range/ibm_range"
            )
        radius = float(grid_value)
    elif arg.startswith("delta="):
        return ModelSpec.prm(guard_delta=float(arg[len("delta="):]))
    elif arg.endswith("*zeta"):
        from .scenario2 import Scenario2Params, zeta_radius
        factor = float(arg[:-len("*zeta")])
        radius = factor * zeta_radius(Scenario2Params.from_config(config))
    else:
        radius = float(arg)
    return ModelSpec.ibm(radius) if kind == "ibm" else ModelSpec.prm(radius)


def parse_config_text(text: str, origin: str = "<string>"
                      ) -> tuple[ScenarioConfig, SweepSpec | None]:
    """Parse and validate a config document; see the module docstring for
    the schema.  Raises :class:`ConfigError` listing every problem found."""
    raw = _read_raw(text, origin)

    for (section, key), (_, line_no) in raw.values.items():
        if key not in _KNOWN_KEYS.get(section, set()):
            raw.complain(line_no, section, key, "unknown key")

    # radio ------------------------------------------------------------
    tx = _get_float(raw, "radio", "tx_power_dbm")
    noise = _get_float(raw, "radio", "noise_power_dbm")
    beta_db = _get_float(raw, "radio", "sinr_threshold_db")
    atten = _get_float(raw, "radio", "ref_attenuation_db")
    alpha = _get_float(raw, "radio", "path_loss_exponent")
    if alpha is not None and alpha <= 2.0:
        raw.complain(raw.line("radio", "path_loss_exponent"), "radio",
                     "path_loss_exponent", f"must exceed 2, got {alpha!r}")
        alpha = None

    # deployment --------------------------------------------------------
    spacing = _get_float(raw, "deployment", "avg_spacing_m", required=False)
    density = _get_float(raw, "deployment", "density_per_m2", required=False)
    if (spacing is None) == (density is None):
        raw.complain(None, "deployment", None,
                     "give exactly one of avg_spacing_m or density_per_m2")
        spacing = density = None
    elif spacing is not None and spacing <= 0.0:
        raw.complain(raw.line("deployment", "avg_spacing_m"), "deployment",
                     "avg_spacing_m", f"must be positive, got {spacing!r}")
        spacing = None
    elif density is not None and density < 0.0:
        raw.complain(raw.line("deployment", "density_per_m2"), "deployment",
                     "density_per_m2", f"must be >= 0, got {density!r}")
        density = None
    link_len = _get_float(raw, "deployment", "link_length_m")
    if link_len is not None and link_len <= 0.0:
        raw.complain(raw.line("deployment", "link_length_m"), "deployment",
                     "link_length_m", f"must be positive, got {link_len!r}")
        link_len = None
    sim_radius = _get_float(raw, "deployment", "sim_radius_m", required=False)
    if sim_radius is not None and sim_radius <= 0.0:
        raw.complain(raw.line("deployment", "sim_radius_m"), "deployment",
                     "sim_radius_m", f"must be positive, got {sim_radius!r}")
        sim_radius = None

    # antenna -----------------------------------------------------------
    pattern = (raw.get("antenna", "pattern") or "omni").lower()
    beamwidth = _get_float(raw, "antenna", "beamwidth_rad", required=False)
    if pattern not in ("omni", "sector"):
        raw.complain(raw.line("antenna", "pattern"), "antenna", "pattern",
                     f"must be omni or sector, got {pattern!r}")
        pattern = "omni"
    if pattern == "sector":
        if beamwidth is None:
            raw.complain(None, "antenna", "beamwidth_rad",
                         "sector antennas need beamwidth_rad")
        elif not 0.0 < beamwidth <= 2.0 * math.pi:
            raw.complain(raw.line("antenna", "beamwidth_rad"), "antenna",
                         "beamwidth_rad",
                         f"must lie in (0, 2*pi], got {beamwidth!r}")
            beamwidth = None
    elif beamwidth is not None:
        raw.complain(raw.line("antenna", "beamwidth_rad"), "antenna",
                     "beamwidth_rad", "only meaningful for pattern = sector")
        beamwidth = None

    # channel -----------------------------------------------------------
    fading = (raw.get("channel", "fading") or "rayleigh").lower()
    if fading not in ("rayleigh", "deterministic"):
        raw.complain(raw.line("channel", "fading"), "channel", "fading",
                     f"must be rayleigh or deterministic, got {fading!r}")
        fading = "rayleigh"
    block_rate = _get_float(raw, "channel", "blockage_rate_per_m", required=False)
    if block_rate is None:
        block_rate = 0.0
    elif block_rate < 0.0:
        raw.complain(raw.line("channel", "blockage_rate_per_m"), "channel",
                     "blockage_rate_per_m", f"must be >= 0, got {block_rate!r}")
        block_rate = 0.0

    # accuracy ----------------------------------------------------------
    xi_text = raw.get("accuracy", "xi")
    xi_weight: float | None = None
    if xi_text is not None and xi_text.strip().lower() != "observed":
        try:
            xi_weight = float(xi_text)
        except ValueError:
            raw.complain(raw.line("accuracy", "xi"), "accuracy", "xi",
                         f"must be 'observed' or a number, got {xi_text!r}")
        else:
            if not 0.0 <= xi_weight <= 1.0:
                raw.complain(raw.line("accuracy", "xi"), "accuracy", "xi",
                             f"must lie in [0, 1], got {xi_weight!r}")
                xi_weight = None
    confidence = _get_float(raw, "accuracy", "confidence", required=False)
    if confidence is None:
        confidence = 0.95
    elif not 0.0 < confidence < 1.0:
        raw.complain(raw.line("accuracy", "confidence"), "accuracy",
                     "confidence", f"must lie in (0, 1), got {confidence!r}")
        confidence = 0.95

    # sweep ---------------------------------------------------------------
    sweep: SweepSpec | None = None
    has_sweep = any(section == "sweep" for section, _ in raw.values)
    if has_sweep:
        variable = (raw.get("sweep", "variable") or "").lower()
        if variable not in SWEEP_VARIABLES:
            raw.complain(raw.line("sweep", "variable"), "sweep", "variable",
                         f"must be one of {', '.join(SWEEP_VARIABLES)}, "
                         f"got {variable!r}")
            variable = None
        grid_text = raw.get("sweep", "grid")
        grid = None
        if grid_text is None:
            raw.complain(None, "sweep", "grid", "missing required key")
        else:
            try:
                grid = parse_grid(grid_text)
            except ValueError as exc:
                raw.complain(raw.line("sweep", "grid"), "sweep", "grid", str(exc))
        models_text = raw.get("sweep", "models")
        tokens = None
        if models_text is None:
            raw.complain(None, "sweep", "models", "missing required key")
        else:
            tokens = []
            for piece in models_text.split(","):
                piece = piece.strip()
                if not piece:
                    continue
                try:
                    tokens.append(parse_model_token(piece))
                except ValueError as exc:
                    raw.complain(raw.line("sweep", "models"), "sweep",
                                 "models", str(exc))
            if not tokens:
                raw.complain(raw.line("sweep", "models"), "sweep", "models",
                             "no models given")
                tokens = None
        n_trials = _get_int(raw, "sweep", "n_trials")
        if n_trials is None:
            n_trials = DEFAULT_SWEEP_TRIALS
        elif n_trials < 1:
            raw.complain(raw.line("sweep", "n_trials"), "sweep", "n_trials",
                         f"must be >= 1, got {n_trials!r}")
            n_trials = DEFAULT_SWEEP_TRIALS
        seed = _get_int(raw, "sweep", "seed")
        if seed is None:
            seed = DEFAULT_SEED
        elif seed < 0:
            raw.complain(raw.line("sweep", "seed"), "sweep", "seed",
                         f"must be >= 0, got {seed!r}")
            seed = DEFAULT_SEED
        if variable and grid and tokens:
            for token in tokens:
                bare = token in ("ibm", "prm")
                if bare and variable not in ("prm_range", "ibm_range"):
                    raw.complain(raw.line("sweep", "models"), "sweep", "models",
                                 f"model {token!r} has no range and the sweep "
                                 "does not provide one")
            if variable == "theta" and any(v <= 0 or v > 2 * math.pi for v in grid):
                raw.complain(raw.line("sweep", "grid"), "sweep", "grid",
                             "theta grid values must lie in (0, 2*pi]")
            if variable == "d_t" and any(v <= 0 for v in grid):
                raw.complain(raw.line("sweep", "grid"), "sweep", "grid",
                             "d_t grid values must be positive")
            if variable in ("prm_range", "ibm_range") and any(v <= 0 for v in grid):
                raw.complain(raw.line("sweep", "grid"), "sweep", "grid",
                             "range grid values must be positive")
            if not raw.problems:
                sweep = SweepSpec(variable, tuple(grid), tuple(tokens),
                                  n_trials, seed)

    if raw.problems:
        raise ConfigError(raw.problems)

    radio = RadioParams(tx, noise, beta_db, atten, alpha)
    if spacing is not None:
        deployment = DeploymentParams.from_spacing(spacing, link_len, sim_radius)
    else:
        deployment = DeploymentParams(density, link_len, sim_radius)
    antenna = AntennaModel.sector(beamwidth) if pattern == "sector" \
        else AntennaModel.omni()
    channel = ChannelModel(fading=fading, blockage_rate_per_m=block_rate)
    config = ScenarioConfig(radio, deployment, antenna=antenna, channel=channel,
                            xi_weight=xi_weight, confidence=confidence)
    return config, sweep


def parse_config(path) -> tuple[ScenarioConfig, SweepSpec | None]:
    """Read and validate a config file from disk."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return parse_config_text(text, origin=str(path))


def bundled_config_path(name: str) -> str:
    """Filesystem path of a config shipped with the package (by stem)."""
    from importlib.resources import files

    base = files("imasim").joinpath("configs")
    candidate = base.joinpath(f"{name}.cfg")
    if not candidate.is_file():
        have = sorted(
            entry.name[:-len(".cfg")]
            for entry in base.iterdir() if entry.name.endswith(".cfg")
        )
        raise ValueError(
            f"no bundled config named {name!r} (available: {', '.join(have)})"
        )
    return str(candidate)
