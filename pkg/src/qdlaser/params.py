"""Physical parameters and plain-text configuration handling.

Internal unit system: time in fs, rates in 1/fs, energies converted to
angular frequencies through hbar = 0.6582119 eV fs. Config files use the
mixed fs/ps/meV units that are conventional for quantum-dot microcavity
work; everything is converted once at load time.
"""

import math
import os
from dataclasses import dataclass, replace, fields

HBAR_EV_FS = 0.6582119  # eV fs

PS = 1000.0  # fs per ps


class ConfigError(ValueError):
    """Raised for unparsable, unknown or out-of-range configuration input."""


@dataclass(frozen=True)
class SimulationParameters:
    """All physical rates and counts of the laser model.

    Rates are amplitude/population rates in 1/fs, times in fs. The
    coupling phases follow the antisymmetry conventions M* = -M and
    G* = -G, i.e. both couplings are purely imaginary; only the
    magnitudes are stored here.
    """

    beta: float = 1e-4              # spontaneous-emission factor
    n_qd: int = 2000                # number of identical emitters
    tau_delay: float = 90.0 * PS    # external round-trip delay (fs)
    feedback_strength: float = 0.5  # S = exp(-kappa_ext * tau_delay)
    kappa: float = 1.0 / (22.0 * PS)      # cavity amplitude loss rate
    kappa_h: float = 1.0 / (22.0 * PS)    # higher-order correlation loss
    kappa_ext: float = math.log(2.0) / (90.0 * PS)  # external-field loss
    gamma_pd: float = 1.36e-3 / HBAR_EV_FS          # pure dephasing
    tau_rel_c_inv: float = 1.0 / 1000.0   # conduction relaxation rate
    tau_rel_v_inv: float = 1.0 / 500.0    # valence relaxation rate
    tau_sp_e_inv: float = 1.0 / 50000.0   # excited-level spont. emission
    tau_sp_g_inv: float = 1.0 / 50000.0   # ground-level spont. emission
    tau_p_inv: float = 1.0 / 20000.0      # pump rate (sweep variable)
    m_coupling: float = 1.25e-5           # |M|, light-matter coupling
    g0: float | None = None               # |G0|; None = calibrate from kappa
    omega0: float = 0.0                   # lasing frequency in the rotating frame
    feedback_phase: float = 0.0           # mirror / feedback phase (rad)

    def __post_init__(self):
        _validate(self)

    def with_pump(self, tau_p_inv):
        return replace(self, tau_p_inv=float(tau_p_inv))

    def with_feedback_strength(self, s):
        """Change S and rederive kappa_ext so the consistency invariant holds."""
        return replace(self, feedback_strength=float(s),
                       kappa_ext=-math.log(s) / self.tau_delay)

    def with_(self, **kw):
        return replace(self, **kw)


@dataclass(frozen=True)
class RunSettings:
    """Grid discretization and run-protocol knobs shared by the experiments."""

    n_modes: int = 128
    bandwidth_factor: float = 40.0   # external-mode bandwidth in units of kappa
    geometry: str = "mirror"         # "free_space" or "mirror"
    seed: int = 2015
    dt_fs: float = 10.0
    t_max_ps: float = 5000.0
    # pump sweep grid (log spaced), pump given as tau_p in fs
    pump_min_fs: float = 2.0e5
    pump_max_fs: float = 2.0e3
    n_pump: int = 40
    # semiclassical averaging protocol
    n_realizations: int = 16
    # steady-state detection
    eps_ss: float = 1e-6
    window_kappa: float = 10.0       # detection window W = window_kappa / kappa
    sample_stride: int = 100         # integrator steps per recorded observable


def _validate(p):
    rates = dict(kappa=p.kappa, kappa_h=p.kappa_h, kappa_ext=p.kappa_ext,
                 gamma_pd=p.gamma_pd, tau_rel_c_inv=p.tau_rel_c_inv,
                 tau_rel_v_inv=p.tau_rel_v_inv, tau_sp_e_inv=p.tau_sp_e_inv,
                 tau_sp_g_inv=p.tau_sp_g_inv, tau_p_inv=p.tau_p_inv,
                 m_coupling=p.m_coupling, tau_delay=p.tau_delay)
    for name, val in rates.items():
        if not (val >= 0.0) or not math.isfinite(val):
            raise ConfigError(f"{name} out of range: must be >= 0, got {val}")
    if not (0.0 <= p.beta <= 1.0):
        raise ConfigError(f"beta out of range: must lie in [0, 1], got {p.beta}")
    if not (0.0 < p.feedback_strength <= 1.0):
        raise ConfigError(
            f"feedback_strength out of range: must lie in (0, 1], got {p.feedback_strength}")
    if p.n_qd < 1:
        raise ConfigError(f"n_qd out of range: must be >= 1, got {p.n_qd}")
    if p.g0 is not None and p.g0 < 0.0:
        raise ConfigError(f"g0 out of range: must be >= 0, got {p.g0}")
    # S and kappa_ext both parametrize the external loss; they must agree.
    if p.tau_delay > 0.0:
        s_implied = math.exp(-p.kappa_ext * p.tau_delay)
        if abs(s_implied - p.feedback_strength) > 1e-9 * p.feedback_strength:
            raise ConfigError(
                "inconsistent feedback parameters: feedback_strength "
                f"{p.feedback_strength} vs exp(-kappa_ext*tau) = {s_implied}")


# config keys, their target (params/run attribute) and unit conversion
_FLOAT_KEYS = {
    "beta":              ("p", "beta", 1.0),
    "tau_delay_ps":      ("p", "tau_delay", PS),
    "feedback_strength": ("p", "feedback_strength", 1.0),
    "kappa_inv_ps":      ("p", "kappa", None),        # inverse time
    "kappa_h_inv_ps":    ("p", "kappa_h", None),
    "kappa_ext_inv_ps":  ("p", "kappa_ext", None),
    "gamma_pd_mev":      ("p", "gamma_pd", 1e-3 / HBAR_EV_FS),
    "tau_rel_c_fs":      ("p", "tau_rel_c_inv", None),
    "tau_rel_v_fs":      ("p", "tau_rel_v_inv", None),
    "tau_sp_fs":         ("p", ("tau_sp_e_inv", "tau_sp_g_inv"), None),
    "pump_fs":           ("p", "tau_p_inv", None),
    "m_coupling_fs":     ("p", "m_coupling", 1.0),    # already a rate in 1/fs
    "g0_fs":             ("p", "g0", 1.0),
    "feedback_phase":    ("p", "feedback_phase", 1.0),
    "bandwidth_factor":  ("r", "bandwidth_factor", 1.0),
    "dt_fs":             ("r", "dt_fs", 1.0),
    "t_max_ps":          ("r", "t_max_ps", 1.0),
    "pump_min_fs":       ("r", "pump_min_fs", 1.0),
    "pump_max_fs":       ("r", "pump_max_fs", 1.0),
    "eps_ss":            ("r", "eps_ss", 1.0),
    "window_kappa":      ("r", "window_kappa", 1.0),
}
_INT_KEYS = {
    "n_qd":           ("p", "n_qd"),
    "n_modes":        ("r", "n_modes"),
    "seed":           ("r", "seed"),
    "n_pump":         ("r", "n_pump"),
    "n_realizations": ("r", "n_realizations"),
    "sample_stride":  ("r", "sample_stride"),
}
_STR_KEYS = {"geometry": ("r", "geometry")}


def parse_config_text(text):
    """Parse ``key = value`` lines (# comments, blank lines allowed) to a dict."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, val = (part.strip() for part in line.split("=", 1))
        if not key or not val:
            raise ConfigError(f"line {lineno}: empty key or value in {raw!r}")
        out[key] = val
    return out


def load_config(path=None, overrides=None):
    """Load parameters and run settings from a plain-text config file.

    All keys are optional; missing keys fall back to the defaults above.
    ``overrides`` is a dict of key -> string applied on top of the file
    (the CLI --override mechanism). Returns (SimulationParameters,
    RunSettings).

    An empty or missing-key config reproduces the published parameter
    set; supplying only feedback_strength and tau_delay_ps derives
    kappa_ext from S = exp(-kappa_ext*tau); supplying an inconsistent
    (S, kappa_ext, tau) triple is rejected.
    """
    raw = {}
    if path is not None:
        if not os.path.exists(path):
            raise ConfigError(f"config file not found: {path}")
        with open(path) as fh:
            raw = parse_config_text(fh.read())
    if overrides:
        raw.update({str(k): str(v) for k, v in overrides.items()})

    pvals, rvals = {}, {}
    kappa_ext_given = "kappa_ext_inv_ps" in raw
    for key, sval in raw.items():
        if key in _FLOAT_KEYS:
            target, attr, scale = _FLOAT_KEYS[key]
            try:
                x = float(sval)
            except ValueError:
                raise ConfigError(f"unparsable value for {key}: {sval!r}") from None
            if scale is None:  # key holds a time, attribute holds a rate
                if x <= 0:
                    raise ConfigError(f"{key} must be > 0, got {x}")
                unit = PS if key.endswith("_ps") else 1.0
                val = 1.0 / (x * unit)
            else:
                val = x * scale
            dest = pvals if target == "p" else rvals
            if isinstance(attr, tuple):
                for a in attr:
                    dest[a] = val
            else:
                dest[attr] = val
        elif key in _INT_KEYS:
            target, attr = _INT_KEYS[key]
            try:
                val = int(sval)
            except ValueError:
                raise ConfigError(f"unparsable value for {key}: {sval!r}") from None
            (pvals if target == "p" else rvals)[attr] = val
        elif key in _STR_KEYS:
            target, attr = _STR_KEYS[key]
            if key == "geometry" and sval not in ("free_space", "mirror"):
                raise ConfigError(f"geometry must be free_space or mirror, got {sval!r}")
            rvals[attr] = sval
        else:
            raise ConfigError(f"unknown config key: {key}")

    # derive kappa_ext from (S, tau) unless it was given explicitly, in
    # which case the validator checks consistency
    if not kappa_ext_given:
        s = pvals.get("feedback_strength", SimulationParameters.feedback_strength)
        tau = pvals.get("tau_delay", SimulationParameters.tau_delay)
        if tau > 0:
            pvals["kappa_ext"] = -math.log(s) / tau

    params = SimulationParameters(**pvals)
    run = RunSettings(**rvals)
    if run.n_modes < 2:
        raise ConfigError(f"n_modes must be >= 2, got {run.n_modes}")
    if run.dt_fs <= 0 or run.t_max_ps <= 0:
        raise ConfigError("dt_fs and t_max_ps must be > 0")
    return params, run


def resolved_config_dict(params, run):
    """Flatten (params, run) back to config-file keys, for manifests."""
    out = {
        "beta": params.beta,
        "n_qd": params.n_qd,
        "tau_delay_ps": params.tau_delay / PS,
        "feedback_strength": params.feedback_strength,
        "kappa_inv_ps": 1.0 / params.kappa / PS,
        "kappa_h_inv_ps": 1.0 / params.kappa_h / PS,
        "kappa_ext_inv_ps": 1.0 / params.kappa_ext / PS,
        "gamma_pd_mev": params.gamma_pd * HBAR_EV_FS * 1e3,
        "tau_rel_c_fs": 1.0 / params.tau_rel_c_inv,
        "tau_rel_v_fs": 1.0 / params.tau_rel_v_inv,
        "tau_sp_fs": 1.0 / params.tau_sp_g_inv,
        "pump_fs": 1.0 / params.tau_p_inv if params.tau_p_inv > 0 else math.inf,
        "m_coupling_fs": params.m_coupling,
        "feedback_phase": params.feedback_phase,
    }
    if params.g0 is not None:
        out["g0_fs"] = params.g0
    for f in fields(RunSettings):
        out[f.name] = getattr(run, f.name)
    return out
