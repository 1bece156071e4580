"""Experiment presets and config-file handling.

Config files are JSON with optional '#' comment lines.  Keys mirror
NetworkConfig fields; an optional "sweep" block holds a swept parameter
name ("M", "K" or "p"), its value list and, for K sweeps, the name of the
rule that generates the parameters of each added BS.
"""

from __future__ import annotations

import json
from importlib import resources

from .model import BsParams, NetworkConfig

PRESET_NAMES = ("fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8")


class ConfigError(ValueError):
    pass


def load_config(path: str) -> tuple[NetworkConfig, dict | None]:
    """Parse a config file; returns (config, sweep-spec or None)."""
    with open(path) as fh:
        raw = fh.read()
    text = "\n".join(line for line in raw.splitlines()
                     if not line.lstrip().startswith("#"))
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}: {exc.msg}") from exc
    return config_from_dict(data)


def config_from_dict(data: dict) -> tuple[NetworkConfig, dict | None]:
    try:
        bs = tuple(BsParams(q=e["q"], r=e["r"], r_prime=e["r_prime"], c=e["c"])
                   for e in data["bs"])
        config = NetworkConfig(
            k=data["k"], m=data["m"], p=data["p"], bs=bs,
            n_max=data.get("n_max", 200),
            horizon=data.get("horizon", 20_000),
            measure_window=data.get("measure_window", 10_000),
            seed=data.get("seed", 0),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid config: {exc}") from exc
    sweep = data.get("sweep")
    if sweep is not None:
        if sweep.get("param") not in ("M", "K", "p"):
            raise ConfigError(f"sweep param must be M, K or p, got {sweep.get('param')!r}")
        if not sweep.get("values"):
            raise ConfigError("sweep value list must be non-empty")
    return config, sweep


def config_to_dict(config: NetworkConfig, sweep: dict | None = None) -> dict:
    data = {
        "k": config.k, "m": config.m, "p": config.p,
        "bs": [{"q": bs.q, "r": bs.r, "r_prime": bs.r_prime, "c": bs.c}
               for bs in config.bs],
        "n_max": config.n_max, "horizon": config.horizon,
        "measure_window": config.measure_window, "seed": config.seed,
    }
    if sweep is not None:
        data["sweep"] = sweep
    return data


def preset_path(name: str) -> str:
    if name not in PRESET_NAMES:
        raise ConfigError(f"unknown preset {name!r}; expected one of {PRESET_NAMES}")
    return str(resources.files("whittle_ua").joinpath(f"presets/{name}.json"))


def load_preset(name: str) -> tuple[NetworkConfig, dict | None]:
    return load_config(preset_path(name))


# Per-BS parameter generation rules for the K sweeps.  Each maps a network
# size k to the full BsParams list, extending a fixed base configuration
# one BS at a time.

def _fig6_bs(k: int) -> list[BsParams]:
    r = [0.28, 0.27, 0.26, 0.25, 0.24]
    rp = [0.40, 0.39, 0.38, 0.37, 0.36]
    c = [150.0, 140.0, 130.0, 120.0, 110.0]
    q = [0.15, 0.148, 0.146, 0.144, 0.142]
    if k < 5:
        raise ConfigError(f"fig6 rule needs k >= 5, got {k}")
    for i in range(6, k + 1):
        r.append(0.29 - 0.01 * i)
        rp.append(0.41 - 0.01 * i)
        c.append(160.0 - 10.0 * i)
        q.append(0.152 - 0.002 * i)
    return [BsParams(q=q[j], r=r[j], r_prime=rp[j], c=c[j]) for j in range(k)]


def _fig7_bs(k: int) -> list[BsParams]:
    r = [0.18, 0.175, 0.17, 0.165, 0.16]
    rp = [0.38, 0.377, 0.374, 0.371, 0.368]
    c = [100.0, 99.7, 99.4, 99.1, 98.8]
    q = [0.25, 0.24, 0.25, 0.24, 0.25]
    if k < 5:
        raise ConfigError(f"fig7 rule needs k >= 5, got {k}")
    for i in range(6, k + 1):
        r.append(0.185 - 0.005 * i)
        rp.append(0.383 - 0.003 * i)
        c.append(100.3 - 0.003 * i)
        q.append((i % 2) * 0.25 + ((i - 1) % 2) * 0.24)
    return [BsParams(q=q[j], r=r[j], r_prime=rp[j], c=c[j]) for j in range(k)]


def _fig8_bs(k: int) -> list[BsParams]:
    r = [0.16, 0.158, 0.159, 0.157, 0.158, 0.156]
    rp = [0.17, 0.168, 0.169, 0.167, 0.168, 0.166]
    c = [100.0, 99.9, 99.8, 99.7, 99.6, 99.5]
    q = [0.21, 0.208, 0.209, 0.207, 0.208, 0.206]
    if k < 6:
        raise ConfigError(f"fig8 rule needs k >= 6, got {k}")
    for i in range(7, k + 1):
        delta = (i % 2) * 0.001 - ((i - 1) % 2) * 0.002
        r.append(r[-1] + delta)
        rp.append(rp[-1] + delta)
        q.append(q[-1] + delta)
        c.append(100.1 - 0.1 * i)
    return [BsParams(q=q[j], r=r[j], r_prime=rp[j], c=c[j]) for j in range(k)]


K_SWEEP_RULES = {"fig6": _fig6_bs, "fig7": _fig7_bs, "fig8": _fig8_bs}


def sweep_configs(config: NetworkConfig, sweep: dict) -> list[tuple[float, NetworkConfig]]:
    """Materialize the per-value configs of a sweep as (value, config) pairs."""
    param = sweep["param"]
    out = []
    for value in sweep["values"]:
        try:
            if param == "M":
                cfg = NetworkConfig(k=config.k, m=int(value), p=config.p,
                                    bs=config.bs, n_max=config.n_max,
                                    horizon=config.horizon,
                                    measure_window=config.measure_window,
                                    seed=config.seed)
            elif param == "p":
                cfg = NetworkConfig(k=config.k, m=config.m, p=float(value),
                                    bs=config.bs, n_max=config.n_max,
                                    horizon=config.horizon,
                                    measure_window=config.measure_window,
                                    seed=config.seed)
            else:  # K
                rule = sweep.get("rule")
                if rule not in K_SWEEP_RULES:
                    raise ConfigError(
                        f"K sweep needs a rule in {sorted(K_SWEEP_RULES)}, got {rule!r}")
                bs = K_SWEEP_RULES[rule](int(value))
                cfg = NetworkConfig(k=int(value), m=config.m, p=config.p,
                                    bs=tuple(bs), n_max=config.n_max,
                                    horizon=config.horizon,
                                    measure_window=config.measure_window,
                                    seed=config.seed)
        except (ValueError, ConfigError) as exc:
            raise ConfigError(f"sweep {param}={value}: {exc}") from exc
        out.append((value, cfg))
    return out
