"""Run configuration: flat key = value text files, hand-editable and diffable.

Example::

    schema = 1
    case = a, b, c, d
    gamma0_kbt = 0, 1, 100
    t_max = 24, 8, 6        # one per temperature (or a single value)
    n_steps = 2000
    omega = 1.0
    omega_b = 0.3333333333333333
    lambda = 0.1

Unknown keys are rejected with line context; every omitted key falls back
to the engine default.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConfigError
from .model import (
    DeltaXMode,
    ModelConfig,
    TimeGrid,
    TrajectorySpec,
    case_from_label,
    validate_config,
)

SCHEMA_VERSION = 1

_MODEL_KEYS = {
    "omega": float,
    "omega_b": float,
    "m_a": float,
    "m_b": float,
    "lambda": float,
    "gamma0": float,
    "sigma": float,
    "sigma_p0": float,
    "hbar": float,
    "cutoff": float,
    "double_prefactor": bool,
}

_SCALAR_KEYS = {
    "schema": int,
    "n_steps": int,
    "epsilon": float,
    "dx0": float,
    "dxf": float,
    "dq0": float,
    "dqf": float,
    "delta_x_mode": str,
    "lyapunov": str,
    "oracle": bool,
    "out_dir": str,
}

_LIST_KEYS = {"case": str, "gamma0_kbt": float, "t_max": float, "formats": str}


@dataclass
class RunConfig:
    """Validated sweep description."""

    cases: list
    temperatures: list        # gamma0 * kb_t products, one row per value
    t_max: list               # aligned with temperatures
    n_steps: int = 2000
    epsilon: float = 0.01
    model_kwargs: dict = field(default_factory=dict)
    dx0: float = None         # None -> 2 sigma
    dxf: float = None         # None -> dx0
    dq0: float = 0.0
    dqf: float = 0.0
    delta_x_mode: DeltaXMode = DeltaXMode.BALLISTIC
    lyapunov: str = "omega"
    formats: tuple = ("csv",)
    oracle: bool = False
    out_dir: str = "results"

    def cell_model(self, case_label: str, g0kt: float) -> ModelConfig:
        """ModelConfig for one sweep cell: kb_t chosen so gamma0*kb_t = g0kt."""
        kw = dict(self.model_kwargs)
        gamma0 = kw.pop("gamma0", 1.0)
        lam = kw.pop("lambda", None)
        if lam is not None:
            kw["lam"] = lam
        if g0kt == 0.0:
            gamma0_cell, kb_t = 0.0, 0.0
        else:
            if gamma0 <= 0:
                raise ConfigError(
                    f"gamma0 must be > 0 to realize gamma0*kb_t = {g0kt}"
                )
            gamma0_cell, kb_t = gamma0, g0kt / gamma0
        cfg = ModelConfig(
            case=case_from_label(case_label), gamma0=gamma0_cell, kb_t=kb_t, **kw
        )
        return validate_config(cfg)

    def trajectory(self, cfg: ModelConfig) -> TrajectorySpec:
        dx0 = 2.0 * cfg.sigma if self.dx0 is None else self.dx0
        dxf = dx0 if self.dxf is None else self.dxf
        return TrajectorySpec(
            dx0=dx0, dxf=dxf, dq0=self.dq0, dqf=self.dqf, delta_x_mode=self.delta_x_mode
        )

    def grid(self, row_index: int) -> TimeGrid:
        return TimeGrid(t_max=self.t_max[row_index], n_steps=self.n_steps)


def _parse_value(key, caster, raw, lineno):
    raw = raw.strip()
    try:
        if caster is bool:
            low = raw.lower()
            if low in ("true", "1", "yes", "on"):
                return True
            if low in ("false", "0", "no", "off"):
                return False
            raise ValueError(f"not a boolean: {raw!r}")
        return caster(raw)
    except ValueError as exc:
        raise ConfigError(f"line {lineno}: key {key!r}: {exc}") from None


def parse_config_text(text: str, source: str = "<string>") -> RunConfig:
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in body.split("=", 1))
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        if key in _LIST_KEYS:
            caster = _LIST_KEYS[key]
            values[key] = [
                _parse_value(key, caster, item, lineno)
                for item in raw.split(",")
                if item.strip() != ""
            ]
        elif key in _MODEL_KEYS:
            values[key] = _parse_value(key, _MODEL_KEYS[key], raw, lineno)
        elif key in _SCALAR_KEYS:
            values[key] = _parse_value(key, _SCALAR_KEYS[key], raw, lineno)
        else:
            known = sorted({**_MODEL_KEYS, **_SCALAR_KEYS, **_LIST_KEYS})
            raise ConfigError(
                f"{source}:{lineno}: unknown key {key!r}; known keys: {', '.join(known)}"
            )

    if values.get("schema") != SCHEMA_VERSION:
        raise ConfigError(
            f"{source}: missing or unsupported 'schema' (need schema = {SCHEMA_VERSION})"
        )

    cases = [c.lower() for c in values.get("case", ["a", "b", "c", "d"])]
    for c in cases:
        case_from_label(c)  # rejects unknown labels, listing the allowed set
    temps = values.get("gamma0_kbt", [0.0])
    if not cases or not temps:
        raise ConfigError(f"{source}: need at least one case and one gamma0_kbt value")
    if any(g < 0 for g in temps):
        raise ConfigError(f"{source}: gamma0_kbt values must be >= 0")

    t_max = values.get("t_max", [10.0])
    if len(t_max) == 1:
        t_max = t_max * len(temps)
    if len(t_max) != len(temps):
        raise ConfigError(
            f"{source}: t_max must have one value or one per gamma0_kbt entry "
            f"({len(temps)}), got {len(t_max)}"
        )

    mode_raw = values.get("delta_x_mode", "ballistic")
    try:
        mode = DeltaXMode(mode_raw)
    except ValueError:
        raise ConfigError(
            f"{source}: delta_x_mode must be one of "
            f"{', '.join(m.value for m in DeltaXMode)}, got {mode_raw!r}"
        ) from None

    lyapunov = values.get("lyapunov", "omega")
    if lyapunov not in ("omega", "two_omega_sq"):
        raise ConfigError(f"{source}: lyapunov must be omega or two_omega_sq")

    formats = tuple(values.get("formats", ["csv"]))
    for fmt in formats:
        if fmt not in ("csv", "svg"):
            raise ConfigError(f"{source}: formats entries must be csv or svg, got {fmt!r}")

    model_kwargs = {k: v for k, v in values.items() if k in _MODEL_KEYS}
    model_kwargs.setdefault("gamma0", 1.0)

    run = RunConfig(
        cases=cases,
        temperatures=temps,
        t_max=t_max,
        n_steps=values.get("n_steps", 2000),
        epsilon=values.get("epsilon", 0.01),
        model_kwargs=model_kwargs,
        dx0=values.get("dx0"),
        dxf=values.get("dxf"),
        dq0=values.get("dq0", 0.0),
        dqf=values.get("dqf", 0.0),
        delta_x_mode=mode,
        lyapunov=lyapunov,
        formats=formats,
        oracle=values.get("oracle", False),
        out_dir=values.get("out_dir", "results"),
    )
    if run.n_steps < 2:
        raise ConfigError(f"{source}: n_steps must be >= 2, got {run.n_steps}")
    if not (0.0 < run.epsilon < 1.0):
        raise ConfigError(f"{source}: epsilon must lie in (0, 1), got {run.epsilon}")
    # validate the model parameters once against an arbitrary cell
    run.cell_model(cases[0], temps[0])
    return run


def load_config(path) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config_text(text, source=str(path))
