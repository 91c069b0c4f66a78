"""Experiment configuration: a flat ``key = value`` file.

Lines are ``key = value``; ``#`` starts a comment; lists are comma-separated.
Recognised keys (aliases in brackets)::

    problems          f1,f2,f3,f4        catalog ids, or lip
    gammas            0.225,1.0          crossed with problems (lip uses 1)
    noise.delta       0,0.01,...,1.0     [delta, deltas]
    noise.mode        uniform            zero | uniform | worst  [mode]
    noise.seed        20250101           unsigned 64-bit  [seed]
    N_list            100,130,...        steps per delay interval  [N]
    grid.tau          20                 [tau]
    grid.n            9                  [n]
    trials            50
    refinement        50                 reference refinement factor R  [R]
    order_window      4                  largest-h points for the order slope
    plateau.tail      4                  smallest-h points for the plateau test
    plateau.slope_tol 0.15
    output.dir        out                [out]
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, fields, replace

from ..noise import NoiseMode
from ..rhs import ProblemId


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


def geometric_n_list(count: int = 13) -> tuple[int, ...]:
    return tuple(int(math.floor(100 * 1.3 ** i)) for i in range(count))


DEFAULT_DELTAS = (0.0, 0.01, 0.05, 0.1, 0.2, 0.5, 0.75, 1.0)
DEFAULT_GAMMAS = (0.225, 1.0)
DEFAULT_SEED = 20250101


@dataclass(frozen=True)
class ExperimentConfig:
    problems: tuple[tuple[ProblemId, float], ...] = tuple(
        (p, g) for p in (ProblemId.F1, ProblemId.F2, ProblemId.F3, ProblemId.F4) for g in DEFAULT_GAMMAS)
    deltas: tuple[float, ...] = DEFAULT_DELTAS
    N_list: tuple[int, ...] = geometric_n_list()
    tau: float = 20.0
    n: int = 9
    trials: int = 50
    refinement: int = 50
    seed: int = DEFAULT_SEED
    mode: NoiseMode = NoiseMode.UNIFORM_RANDOM
    order_window: int = 4
    plateau_tail: int = 4
    plateau_slope_tol: float = 0.15
    out_dir: str = field(default="out", compare=False)

    def __post_init__(self):
        try:
            object.__setattr__(self, "mode", NoiseMode.parse(self.mode))
        except ValueError as exc:
            raise ConfigError("noise.mode", str(exc)) from None
        validate(self)

    def echo(self) -> dict:
        """Config values that determine results (output location excluded)."""
        out = {}
        for f in fields(self):
            if f.name == "out_dir":
                continue
            v = getattr(self, f.name)
            if f.name == "problems":
                v = ",".join(f"{p.value}:{_fmt(g)}" for p, g in v)
            elif isinstance(v, tuple):
                v = ",".join(_fmt(x) for x in v)
            elif isinstance(v, NoiseMode):
                v = v.value
            else:
                v = _fmt(v)
            out[f.name] = v
        return out


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


PROFILES = {
    "paper": {},
    "desk": {"N_list": geometric_n_list(9), "trials": 10, "refinement": 20},
}


def validate(cfg: ExperimentConfig):
    if not cfg.problems:
        raise ConfigError("problems", "at least one problem is required")
    for _, g in cfg.problems:
        if not (0.0 < g <= 1.0):
            raise ConfigError("gammas", f"gamma must lie in (0, 1], got {g!r}")
    if not cfg.deltas:
        raise ConfigError("noise.delta", "at least one noise level is required")
    for d in cfg.deltas:
        if not (0.0 <= d <= 1.0):
            raise ConfigError("noise.delta", f"value {d!r} outside the legal range [0, 1]")
    if len(set(cfg.deltas)) != len(cfg.deltas):
        raise ConfigError("noise.delta", "duplicate noise levels")
    if not cfg.N_list or any(N < 1 for N in cfg.N_list):
        raise ConfigError("N_list", "need one or more positive step counts")
    if len(set(cfg.N_list)) != len(cfg.N_list):
        raise ConfigError("N_list", "duplicate step counts")
    if not (cfg.tau > 0) or not math.isfinite(cfg.tau):
        raise ConfigError("grid.tau", f"must be positive and finite, got {cfg.tau!r}")
    if cfg.n < 0:
        raise ConfigError("grid.n", f"must be nonnegative, got {cfg.n!r}")
    if cfg.trials < 1:
        raise ConfigError("trials", f"must be positive, got {cfg.trials!r}")
    if cfg.refinement < 1:
        raise ConfigError("refinement", f"must be positive, got {cfg.refinement!r}")
    if not 0 <= cfg.seed < 2**64:
        raise ConfigError("noise.seed", f"must be an unsigned 64-bit integer, got {cfg.seed!r}")
    if cfg.order_window < 2:
        raise ConfigError("order_window", "must be at least 2")
    if cfg.plateau_tail < 2:
        raise ConfigError("plateau.tail", "must be at least 2")
    if not cfg.plateau_slope_tol > 0:
        raise ConfigError("plateau.slope_tol", "must be positive")


_ALIASES = {
    "delta": "noise.delta", "deltas": "noise.delta", "mode": "noise.mode", "seed": "noise.seed",
    "n_list": "N_list", "N": "N_list", "tau": "grid.tau", "n": "grid.n", "R": "refinement",
    "out": "output.dir",
}
_KEYS = {"problems", "gammas", "noise.delta", "noise.mode", "noise.seed", "N_list", "grid.tau",
         "grid.n", "trials", "refinement", "order_window", "plateau.tail", "plateau.slope_tol",
         "output.dir"}


def _split(key, value):
    items = [v.strip() for v in value.split(",") if v.strip()]
    if not items:
        raise ConfigError(key, "empty list")
    return items


def _number(key, text, kind):
    try:
        if kind is int:
            v = float(text)
            if v != int(v):
                raise ValueError
            return int(v)
        v = float(text)
        if not math.isfinite(v):
            raise ValueError
        return v
    except ValueError:
        raise ConfigError(key, f"expected {'an integer' if kind is int else 'a real number'}, got {text!r}") from None


def read_pairs(text: str) -> dict[str, str]:
    pairs = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = _ALIASES.get(key, key)
        if key not in _KEYS:
            raise ConfigError(key, "unknown key")
        if key in pairs:
            raise ConfigError(key, "given more than once")
        pairs[key] = value
    return pairs


def apply_pairs(base: ExperimentConfig, pairs: dict[str, str]) -> ExperimentConfig:
    upd = {}
    if "problems" in pairs or "gammas" in pairs:
        ids = ([ProblemId.parse(p) for p in _split("problems", pairs["problems"])]
               if "problems" in pairs else sorted({p for p, _ in base.problems}, key=lambda p: p.index))
        gammas = ([_number("gammas", g, float) for g in _split("gammas", pairs["gammas"])]
                  if "gammas" in pairs else list(dict.fromkeys(g for _, g in base.problems)))
        for g in gammas:
            if not (0.0 < g <= 1.0):
                raise ConfigError("gammas", f"gamma must lie in (0, 1], got {g!r}")
        combos = []
        for p in ids:
            for g in ([1.0] if p is ProblemId.LIP_BENCH else gammas):
                if (p, g) not in combos:
                    combos.append((p, g))
        upd["problems"] = tuple(combos)
    if "noise.delta" in pairs:
        upd["deltas"] = tuple(_number("noise.delta", v, float) for v in _split("noise.delta", pairs["noise.delta"]))
    if "noise.mode" in pairs:
        try:
            upd["mode"] = NoiseMode.parse(pairs["noise.mode"])
        except ValueError as exc:
            raise ConfigError("noise.mode", str(exc)) from None
    if "noise.seed" in pairs:
        upd["seed"] = _number("noise.seed", pairs["noise.seed"], int)
    if "N_list" in pairs:
        upd["N_list"] = tuple(_number("N_list", v, int) for v in _split("N_list", pairs["N_list"]))
    simple = {"grid.tau": ("tau", float), "grid.n": ("n", int), "trials": ("trials", int),
              "refinement": ("refinement", int), "order_window": ("order_window", int),
              "plateau.tail": ("plateau_tail", int), "plateau.slope_tol": ("plateau_slope_tol", float)}
    for key, (attr, kind) in simple.items():
        if key in pairs:
            upd[attr] = _number(key, pairs[key], kind)
    if "output.dir" in pairs:
        upd["out_dir"] = pairs["output.dir"]
    return replace(base, **upd)


def profile_config(profile: str = "paper") -> ExperimentConfig:
    if profile not in PROFILES:
        raise ConfigError("profile", f"unknown profile {profile!r}; expected desk or paper")
    return replace(ExperimentConfig(), **PROFILES[profile])


def parse_config(path: str | os.PathLike | None = None, profile: str = "paper") -> ExperimentConfig:
    """Read a config file on top of a profile (``paper`` mirrors the published protocol)."""
    base = profile_config(profile)
    if path is None:
        return base
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {os.fspath(path)!r}: {exc.strerror}") from None
    return apply_pairs(base, read_pairs(text))
