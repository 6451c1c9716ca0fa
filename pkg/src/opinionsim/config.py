"""Scenario configuration: TOML schema, strict validation, canonical
emission, and builders for the engine-level objects.

Schema (TOML)::

    [simulation]
    seed = 42                 # required, int
    epsilon = 0.01            # required, > 0
    nu = 1.0                  # exactly one of nu (raw penalty) or kappa
    c_f = 1.0                 # > 0
    variance_ff = 0.01        # scaled noise variances, >= 0
    variance_fl = 0.01
    variance_ll = 0.01
    t_final = 1.0             # >= 0
    checkpoints = [0.0, 1.0]  # optional, subset of [0, t_final]

    [followers]
    n = 10000
    initial = { law = "uniform", low = -1.0, high = -0.5 }
    kernel = { kind = "constant", level = 1.0 }       # optional, default unit
    diffusion = { kind = "quadratic_cap" }            # optional, default

    [[leaders]]               # one table per family
    rho = 0.05
    # n = 500                 # optional; default round(rho * n_f / (1 - sum rho))
    target = 0.5
    psi = 0.5
    c_fl_hat = 0.1
    c_l_hat = 0.1
    initial = { law = "normal", mean = 0.5, variance = 0.05 }
    kernel_s = { kind = "constant", level = 1.0 }     # optional
    kernel_r = { kind = "constant", level = 1.0 }     # optional
    diffusion_hat = { kind = "quadratic_cap" }        # optional
    diffusion_tilde = { kind = "quadratic_cap" }      # optional
    # adaptive = { delta = 0.5, delta_bar = 0.5 }     # optional

    [output]                  # optional section
    bins = 100
    moment_stride = 1
    oracle_tolerance = 0.02

Initial laws: ``uniform`` (low/high inside [-1, 1]), ``normal``
(mean/variance, truncated to [-1, 1] by resampling), ``gamma``
(shape/scale/shift, default shift -1, truncated by resampling).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .core import (
    AdaptiveWindows,
    CompromiseKernel,
    DiffusionShape,
    LeaderStrategy,
    ScaledParams,
    derive_scaled,
)
from .engine import FamilyModel, InitialLaw, LeaderFamily, Model, OpinionEnsemble, sample_initial


class ConfigError(ValueError):
    """Validation failed; ``errors`` lists every offending key with the
    violated constraint."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("invalid configuration:\n  " + "\n  ".join(self.errors))


_SIM_KEYS = {"seed", "epsilon", "nu", "kappa", "c_f", "variance_ff",
             "variance_fl", "variance_ll", "t_final", "checkpoints"}
_FOLLOWER_KEYS = {"n", "initial", "kernel", "diffusion"}
_LEADER_KEYS = {"rho", "n", "target", "psi", "c_fl_hat", "c_l_hat", "initial",
                "kernel_s", "kernel_r", "diffusion_hat", "diffusion_tilde", "adaptive"}
_OUTPUT_KEYS = {"bins", "moment_stride", "oracle_tolerance"}

_UNIT_KERNEL = CompromiseKernel.constant(1.0)
_QUAD_CAP = DiffusionShape.quadratic_cap()


@dataclass(frozen=True)
class FollowerConfig:
    n: int
    initial: InitialLaw
    kernel: CompromiseKernel = _UNIT_KERNEL
    diffusion: DiffusionShape = _QUAD_CAP


@dataclass(frozen=True)
class LeaderConfig:
    rho: float
    target: float
    psi: float
    c_fl_hat: float
    c_l_hat: float
    initial: InitialLaw
    n: int | None = None
    kernel_s: CompromiseKernel = _UNIT_KERNEL
    kernel_r: CompromiseKernel = _UNIT_KERNEL
    diffusion_hat: DiffusionShape = _QUAD_CAP
    diffusion_tilde: DiffusionShape = _QUAD_CAP
    adaptive: AdaptiveWindows | None = None

    def strategy(self) -> LeaderStrategy:
        return LeaderStrategy(psi=self.psi, target=self.target, adaptive=self.adaptive)


@dataclass(frozen=True)
class OutputConfig:
    bins: int = 100
    moment_stride: int = 1
    oracle_tolerance: float = 0.02


@dataclass(frozen=True)
class ScenarioConfig:
    seed: int
    epsilon: float
    kappa: float
    c_f: float
    variance_ff: float
    variance_fl: float
    variance_ll: float
    t_final: float
    followers: FollowerConfig
    leaders: tuple[LeaderConfig, ...]
    checkpoints: tuple[float, ...] = ()
    output: OutputConfig = field(default_factory=OutputConfig)

    # -- builders ------------------------------------------------------------

    def scaled_params(self) -> ScaledParams:
        return derive_scaled(
            epsilon=self.epsilon,
            kappa=self.kappa,
            c_f=self.c_f,
            variance_ff=self.variance_ff,
            variance_fl=self.variance_fl,
            variance_ll=self.variance_ll,
            families=[(l.c_fl_hat, l.c_l_hat, l.rho) for l in self.leaders],
        )

    def build_model(self) -> Model:
        return Model(
            params=self.scaled_params(),
            kernel_p=self.followers.kernel,
            shape_d=self.followers.diffusion,
            families=tuple(
                FamilyModel(
                    kernel_s=l.kernel_s,
                    kernel_r=l.kernel_r,
                    shape_hat=l.diffusion_hat,
                    shape_tilde=l.diffusion_tilde,
                )
                for l in self.leaders
            ),
        )

    def leader_counts(self) -> tuple[int, ...]:
        """Explicit counts where given; otherwise the mass convention
        N_L_p = round(rho_p * N_total) with N_total = N_F / (1 - sum rho)."""
        total_rho = sum(l.rho for l in self.leaders)
        n_total = self.followers.n / (1.0 - total_rho) if total_rho < 1.0 else self.followers.n
        return tuple(
            l.n if l.n is not None else max(2, round(l.rho * n_total))
            for l in self.leaders
        )

    def build_ensemble(self, rng) -> OpinionEnsemble:
        followers = sample_initial(self.followers.initial, self.followers.n, rng)
        families = [
            LeaderFamily(sample_initial(l.initial, count, rng), l.strategy())
            for l, count in zip(self.leaders, self.leader_counts())
        ]
        return OpinionEnsemble(followers, families)


# -- parsing helpers ----------------------------------------------------------


def _want_number(table, key, prefix, errors, *, required=True, default=None):
    if key not in table:
        if required:
            errors.append(f"{prefix}{key}: required key is missing")
        return default
    v = table[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        errors.append(f"{prefix}{key}: must be a number, got {v!r}")
        return default
    return float(v)


def _want_int(table, key, prefix, errors, *, required=True, default=None):
    if key not in table:
        if required:
            errors.append(f"{prefix}{key}: required key is missing")
        return default
    v = table[key]
    if isinstance(v, bool) or not isinstance(v, int):
        if isinstance(v, float) and v.is_integer():
            return int(v)
        errors.append(f"{prefix}{key}: must be an integer, got {v!r}")
        return default
    return v


def _check_unknown(table, allowed, prefix, errors):
    for key in table:
        if key not in allowed:
            errors.append(f"{prefix}{key}: unknown key")


def _parse_kernel(table, prefix, errors, default):
    if table is None:
        return default
    if not isinstance(table, dict):
        errors.append(f"{prefix}: must be a table like {{ kind = \"constant\", level = 1.0 }}")
        return default
    _check_unknown(table, {"kind", "level", "threshold"}, prefix + ".", errors)
    kind = table.get("kind")
    try:
        if kind == "constant":
            return CompromiseKernel.constant(float(table.get("level", 1.0)))
        if kind == "bounded_confidence":
            if "threshold" not in table:
                errors.append(f"{prefix}.threshold: required for bounded_confidence")
                return default
            return CompromiseKernel.bounded_confidence(float(table["threshold"]))
        errors.append(f"{prefix}.kind: must be 'constant' or 'bounded_confidence', got {kind!r}")
    except (TypeError, ValueError) as exc:
        errors.append(f"{prefix}: {exc}")
    return default


def _parse_diffusion(table, prefix, errors, default):
    if table is None:
        return default
    if not isinstance(table, dict):
        errors.append(f"{prefix}: must be a table like {{ kind = \"quadratic_cap\" }}")
        return default
    _check_unknown(table, {"kind", "level"}, prefix + ".", errors)
    kind = table.get("kind")
    try:
        if kind == "none":
            return DiffusionShape.none()
        if kind == "constant":
            if "level" not in table:
                errors.append(f"{prefix}.level: required for constant diffusion")
                return default
            return DiffusionShape.constant(float(table["level"]))
        if kind == "quadratic_cap":
            return DiffusionShape.quadratic_cap()
        errors.append(f"{prefix}.kind: must be 'none', 'constant' or 'quadratic_cap', got {kind!r}")
    except (TypeError, ValueError) as exc:
        errors.append(f"{prefix}: {exc}")
    return default


_LAW_KEYS = {
    "uniform": {"law", "low", "high"},
    "normal": {"law", "mean", "variance"},
    "gamma": {"law", "shape", "scale", "shift"},
}


def _parse_initial(table, prefix, errors):
    if table is None:
        errors.append(f"{prefix}: required key is missing")
        return None
    if not isinstance(table, dict):
        errors.append(f"{prefix}: must be a table like {{ law = \"uniform\", low = -1.0, high = 1.0 }}")
        return None
    law = table.get("law")
    if law not in _LAW_KEYS:
        errors.append(f"{prefix}.law: must be one of {sorted(_LAW_KEYS)}, got {law!r}")
        return None
    _check_unknown(table, _LAW_KEYS[law], prefix + ".", errors)
    try:
        if law == "uniform":
            return InitialLaw("uniform", low=float(table["low"]), high=float(table["high"]))
        if law == "normal":
            return InitialLaw("normal", mean=float(table["mean"]),
                              variance=float(table["variance"]))
        return InitialLaw(
            "gamma",
            shape=float(table.get("shape", 2.0)),
            scale=float(table.get("scale", 0.25)),
            shift=float(table.get("shift", -1.0)),
        )
    except KeyError as exc:
        errors.append(f"{prefix}.{exc.args[0]}: required key is missing")
    except (TypeError, ValueError) as exc:
        errors.append(f"{prefix}: {exc}")
    return None


def validate_config(raw: dict) -> ScenarioConfig:
    """Validate a parsed TOML mapping; raises ConfigError listing every
    violation (unknown key, missing key, range violation, certificate
    failure)."""
    errors: list[str] = []
    _check_unknown(raw, {"simulation", "followers", "leaders", "output"}, "", errors)

    sim = raw.get("simulation")
    if not isinstance(sim, dict):
        errors.append("simulation: required section is missing")
        sim = {}
    _check_unknown(sim, _SIM_KEYS, "simulation.", errors)
    seed = _want_int(sim, "seed", "simulation.", errors)
    epsilon = _want_number(sim, "epsilon", "simulation.", errors)
    c_f = _want_number(sim, "c_f", "simulation.", errors)
    t_final = _want_number(sim, "t_final", "simulation.", errors)
    variances = {
        k: _want_number(sim, k, "simulation.", errors)
        for k in ("variance_ff", "variance_fl", "variance_ll")
    }
    nu = _want_number(sim, "nu", "simulation.", errors, required=False)
    kappa = _want_number(sim, "kappa", "simulation.", errors, required=False)
    if (nu is None) == (kappa is None):
        errors.append("simulation: exactly one of nu or kappa must be set")
    if epsilon is not None and epsilon <= 0.0:
        errors.append(f"simulation.epsilon: must be > 0, got {epsilon}")
    if nu is not None and nu <= 0.0:
        errors.append(f"simulation.nu: must be > 0, got {nu}")
    if kappa is not None and kappa <= 0.0:
        errors.append(f"simulation.kappa: must be > 0, got {kappa}")
    if c_f is not None and c_f <= 0.0:
        errors.append(f"simulation.c_f: must be > 0, got {c_f}")
    if t_final is not None and t_final < 0.0:
        errors.append(f"simulation.t_final: must be >= 0, got {t_final}")
    for k, v in variances.items():
        if v is not None and v < 0.0:
            errors.append(f"simulation.{k}: must be >= 0, got {v}")
    checkpoints: list[float] = []
    raw_cp = sim.get("checkpoints", [])
    if not isinstance(raw_cp, list) or any(
            isinstance(c, bool) or not isinstance(c, (int, float)) for c in raw_cp):
        errors.append("simulation.checkpoints: must be a list of numbers")
    else:
        checkpoints = [float(c) for c in raw_cp]
        if t_final is not None:
            for c in checkpoints:
                if not 0.0 <= c <= t_final:
                    errors.append(
                        f"simulation.checkpoints: {c} outside [0, {t_final}]"
                    )

    fol = raw.get("followers")
    if not isinstance(fol, dict):
        errors.append("followers: required section is missing")
        fol = {}
    _check_unknown(fol, _FOLLOWER_KEYS, "followers.", errors)
    n_f = _want_int(fol, "n", "followers.", errors)
    if n_f is not None and n_f < 1:
        errors.append(f"followers.n: must be >= 1, got {n_f}")
    f_initial = _parse_initial(fol.get("initial"), "followers.initial", errors)
    f_kernel = _parse_kernel(fol.get("kernel"), "followers.kernel", errors, _UNIT_KERNEL)
    f_diffusion = _parse_diffusion(fol.get("diffusion"), "followers.diffusion", errors, _QUAD_CAP)

    raw_leaders = raw.get("leaders")
    leaders: list[LeaderConfig] = []
    if not isinstance(raw_leaders, list) or not raw_leaders:
        errors.append("leaders: at least one [[leaders]] family is required")
        raw_leaders = []
    for k, tab in enumerate(raw_leaders):
        prefix = f"leaders[{k}]."
        if not isinstance(tab, dict):
            errors.append(f"leaders[{k}]: must be a table")
            continue
        _check_unknown(tab, _LEADER_KEYS, prefix, errors)
        rho = _want_number(tab, "rho", prefix, errors)
        target = _want_number(tab, "target", prefix, errors)
        psi = _want_number(tab, "psi", prefix, errors)
        c_fl_hat = _want_number(tab, "c_fl_hat", prefix, errors)
        c_l_hat = _want_number(tab, "c_l_hat", prefix, errors)
        n_l = _want_int(tab, "n", prefix, errors, required=False)
        if rho is not None and not 0.0 < rho <= 1.0:
            errors.append(f"{prefix}rho: must be in (0, 1], got {rho}")
        if target is not None and not -1.0 <= target <= 1.0:
            errors.append(f"{prefix}target: must be in [-1, 1], got {target}")
        if psi is not None and not 0.0 <= psi <= 1.0:
            errors.append(f"{prefix}psi: must be in [0, 1], got {psi}")
        if c_fl_hat is not None and c_fl_hat <= 0.0:
            errors.append(f"{prefix}c_fl_hat: must be > 0, got {c_fl_hat}")
        if c_l_hat is not None and c_l_hat <= 0.0:
            errors.append(f"{prefix}c_l_hat: must be > 0, got {c_l_hat}")
        if n_l is not None and n_l < 2:
            errors.append(f"{prefix}n: must be >= 2, got {n_l}")
        initial = _parse_initial(tab.get("initial"), prefix + "initial", errors)
        kernel_s = _parse_kernel(tab.get("kernel_s"), prefix + "kernel_s", errors, _UNIT_KERNEL)
        kernel_r = _parse_kernel(tab.get("kernel_r"), prefix + "kernel_r", errors, _UNIT_KERNEL)
        diff_hat = _parse_diffusion(tab.get("diffusion_hat"), prefix + "diffusion_hat",
                                    errors, _QUAD_CAP)
        diff_tilde = _parse_diffusion(tab.get("diffusion_tilde"), prefix + "diffusion_tilde",
                                      errors, _QUAD_CAP)
        adaptive = None
        if "adaptive" in tab:
            at = tab["adaptive"]
            if not isinstance(at, dict):
                errors.append(f"{prefix}adaptive: must be a table with delta and delta_bar")
            else:
                _check_unknown(at, {"delta", "delta_bar"}, prefix + "adaptive.", errors)
                d = _want_number(at, "delta", prefix + "adaptive.", errors)
                db = _want_number(at, "delta_bar", prefix + "adaptive.", errors)
                if d is not None and db is not None:
                    try:
                        adaptive = AdaptiveWindows(delta=d, delta_bar=db)
                    except ValueError as exc:
                        errors.append(f"{prefix}adaptive: {exc}")
        if not errors and None not in (rho, target, psi, c_fl_hat, c_l_hat, initial):
            leaders.append(LeaderConfig(
                rho=rho, target=target, psi=psi, c_fl_hat=c_fl_hat,
                c_l_hat=c_l_hat, initial=initial, n=n_l, kernel_s=kernel_s,
                kernel_r=kernel_r, diffusion_hat=diff_hat,
                diffusion_tilde=diff_tilde, adaptive=adaptive,
            ))

    out = raw.get("output", {})
    output = OutputConfig()
    if not isinstance(out, dict):
        errors.append("output: must be a table")
    else:
        _check_unknown(out, _OUTPUT_KEYS, "output.", errors)
        bins = _want_int(out, "bins", "output.", errors, required=False, default=100)
        stride = _want_int(out, "moment_stride", "output.", errors, required=False, default=1)
        tol = _want_number(out, "oracle_tolerance", "output.", errors,
                           required=False, default=0.02)
        if bins is not None and bins < 2:
            errors.append(f"output.bins: must be >= 2, got {bins}")
        if stride is not None and stride < 1:
            errors.append(f"output.moment_stride: must be >= 1, got {stride}")
        if tol is not None and tol <= 0.0:
            errors.append(f"output.oracle_tolerance: must be > 0, got {tol}")
        if not errors:
            output = OutputConfig(bins=bins, moment_stride=stride, oracle_tolerance=tol)

    total_rho = sum(l.rho for l in leaders)
    if leaders and total_rho > 1.0 + 1e-12:
        errors.append(f"leaders: total rho must be <= 1, got {total_rho}")

    if errors:
        raise ConfigError(errors)

    cfg = ScenarioConfig(
        seed=seed,
        epsilon=epsilon,
        kappa=kappa if kappa is not None else nu / epsilon,
        c_f=c_f,
        variance_ff=variances["variance_ff"],
        variance_fl=variances["variance_fl"],
        variance_ll=variances["variance_ll"],
        t_final=t_final,
        followers=FollowerConfig(n=n_f, initial=f_initial, kernel=f_kernel,
                                 diffusion=f_diffusion),
        leaders=tuple(leaders),
        checkpoints=tuple(checkpoints),
        output=output,
    )

    # bound certificates are part of config validity
    cert_errors = []
    for k, cert in enumerate(cfg.build_model().certificates()):
        for name, ok in (
            ("contraction condition alpha*r >= beta/2", cert.contraction_ok),
            ("leader noise window", cert.leader_noise_ok),
            ("follower noise window", cert.follower_noise_ok),
        ):
            if not ok:
                cert_errors.append(f"leaders[{k}]: bound certificate fails the {name}")
    if cert_errors:
        raise ConfigError(cert_errors)
    return cfg


def load_config(path) -> ScenarioConfig:
    """Parse and validate a scenario file."""
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    return validate_config(raw)


def apply_overrides(raw: dict, overrides) -> dict:
    """Apply dotted-path ``KEY=VALUE`` overrides to a parsed TOML mapping.

    List elements are addressed numerically (``leaders.0.psi=0.3``).
    Values are parsed as TOML literals, falling back to bare strings.
    """
    for item in overrides:
        if "=" not in item:
            raise ConfigError([f"override {item!r}: expected KEY=VALUE"])
        key, _, raw_value = item.partition("=")
        try:
            value = tomllib.loads(f"v = {raw_value}")["v"]
        except tomllib.TOMLDecodeError:
            value = raw_value
        node = raw
        parts = key.strip().split(".")
        for part in parts[:-1]:
            if isinstance(node, list):
                try:
                    node = node[int(part)]
                except (ValueError, IndexError):
                    raise ConfigError([f"override {key}: bad list index {part!r}"])
            elif isinstance(node, dict):
                node = node.setdefault(part, {})
            else:
                raise ConfigError([f"override {key}: {part!r} is not a section"])
        last = parts[-1]
        if isinstance(node, list):
            try:
                node[int(last)] = value
            except (ValueError, IndexError):
                raise ConfigError([f"override {key}: bad list index {last!r}"])
        elif isinstance(node, dict):
            node[last] = value
        else:
            raise ConfigError([f"override {key}: cannot assign into {type(node).__name__}"])
    return raw


def load_config_with_overrides(path, overrides) -> ScenarioConfig:
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    return validate_config(apply_overrides(raw, overrides))


# -- canonical emission --------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"cannot emit non-finite float {value}")
        return repr(value)
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    raise TypeError(f"cannot emit {value!r}")


def _inline(pairs) -> str:
    return "{ " + ", ".join(f"{k} = {_fmt(v)}" for k, v in pairs) + " }"


def _kernel_pairs(k: CompromiseKernel):
    if k.kind == "constant":
        return [("kind", "constant"), ("level", k.level)]
    return [("kind", "bounded_confidence"), ("threshold", k.threshold)]


def _diffusion_pairs(d: DiffusionShape):
    if d.kind == "constant":
        return [("kind", "constant"), ("level", d.level)]
    return [("kind", d.kind)]


def _initial_pairs(law: InitialLaw):
    if law.law == "uniform":
        return [("law", "uniform"), ("low", law.low), ("high", law.high)]
    if law.law == "normal":
        return [("law", "normal"), ("mean", law.mean), ("variance", law.variance)]
    return [("law", "gamma"), ("shape", law.shape), ("scale", law.scale),
            ("shift", law.shift)]


def emit_canonical(cfg: ScenarioConfig) -> str:
    """Render the validated config as canonical TOML; reloading the text
    reproduces an identical ScenarioConfig."""
    lines = ["[simulation]"]
    lines.append(f"seed = {_fmt(cfg.seed)}")
    for key in ("epsilon", "kappa", "c_f", "variance_ff", "variance_fl",
                "variance_ll", "t_final"):
        lines.append(f"{key} = {_fmt(float(getattr(cfg, key)))}")
    lines.append("checkpoints = [" + ", ".join(_fmt(float(c)) for c in cfg.checkpoints) + "]")

    lines.append("")
    lines.append("[followers]")
    lines.append(f"n = {_fmt(cfg.followers.n)}")
    lines.append(f"initial = {_inline(_initial_pairs(cfg.followers.initial))}")
    lines.append(f"kernel = {_inline(_kernel_pairs(cfg.followers.kernel))}")
    lines.append(f"diffusion = {_inline(_diffusion_pairs(cfg.followers.diffusion))}")

    for leader in cfg.leaders:
        lines.append("")
        lines.append("[[leaders]]")
        lines.append(f"rho = {_fmt(float(leader.rho))}")
        if leader.n is not None:
            lines.append(f"n = {_fmt(leader.n)}")
        for key in ("target", "psi", "c_fl_hat", "c_l_hat"):
            lines.append(f"{key} = {_fmt(float(getattr(leader, key)))}")
        lines.append(f"initial = {_inline(_initial_pairs(leader.initial))}")
        lines.append(f"kernel_s = {_inline(_kernel_pairs(leader.kernel_s))}")
        lines.append(f"kernel_r = {_inline(_kernel_pairs(leader.kernel_r))}")
        lines.append(f"diffusion_hat = {_inline(_diffusion_pairs(leader.diffusion_hat))}")
        lines.append(f"diffusion_tilde = {_inline(_diffusion_pairs(leader.diffusion_tilde))}")
        if leader.adaptive is not None:
            lines.append("adaptive = " + _inline([
                ("delta", leader.adaptive.delta),
                ("delta_bar", leader.adaptive.delta_bar),
            ]))

    lines.append("")
    lines.append("[output]")
    lines.append(f"bins = {_fmt(cfg.output.bins)}")
    lines.append(f"moment_stride = {_fmt(cfg.output.moment_stride)}")
    lines.append(f"oracle_tolerance = {_fmt(float(cfg.output.oracle_tolerance))}")
    lines.append("")
    return "\n".join(lines)


# -- bundled scenarios ----------------------------------------------------------


def scenario_path(name: str) -> Path:
    """Filesystem path of a bundled scenario (e.g. ``test1a``)."""
    base = resources.files("opinionsim") / "scenarios" / f"{name}.toml"
    return Path(str(base))


def list_scenarios() -> list[str]:
    base = resources.files("opinionsim") / "scenarios"
    return sorted(p.name[:-5] for p in Path(str(base)).glob("*.toml"))
