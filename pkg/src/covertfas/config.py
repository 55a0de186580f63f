"""Run configuration: INI parsing, presets, scenarios, and sweep plans.

One structured key-value file drives the CLI.  Sections: ``[link]``
(powers in dB/dBm, rate, margin), ``[bob]`` / ``[willie]`` (grid and
degrees of freedom), ``[sweep]``, ``[mc]``, ``[qmc]``, plus any number of
``[scenario:NAME]`` sections whose ``node.key = value`` entries override
the baseline per curve.  Decibel inputs are converted on load; everything
downstream is linear (watts).

Two error flavors propagate distinctly: :class:`ConfigParseError` for
malformed files (exit code 2 at the CLI) and plain ``ValueError`` from the
domain types for invariant violations (exit code 3).
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace

import numpy as np

from .geometry import KERNELS, PortGrid
from .metrics import DEPENDENCE_MODES, LinkBudget, NodeFas, db_to_linear, dbm_to_watts
from .mvt import QmcSettings

__all__ = [
    "ConfigParseError",
    "Scenario",
    "SweepSpec",
    "RunConfig",
    "load_config",
    "preset_text",
    "PRESETS",
    "SWEEP_AXES",
]

SWEEP_AXES = ("zeta", "p_a_dbm", "n_ports_w", "n_ports_b", "w_aperture")

_KNOWN_SECTIONS = {"link", "bob", "willie", "sweep", "mc", "qmc"}
_LINK_KEYS = {"p_a_dbm", "sigma2_w_db", "sigma2_b_db", "r_b", "mu", "zeta", "dependence"}
_NODE_KEYS = {"n1", "n2", "w1", "w2", "nu", "kernel"}
_SWEEP_KEYS = {"axis", "start", "stop", "points", "scenarios"}
_MC_KEYS = {"trials", "symbols_per_slot"}
_QMC_KEYS = {"target_abs_error", "max_points", "shifts", "seed"}

# Built-in scenario names picked by axis when the config names none.
_ZETA_DEFAULT_SCENARIOS = ("fas-20dbm", "fas-25dbm", "fpa-20dbm", "fpa-25dbm")
_POWER_DEFAULT_SCENARIOS = ("fpa", "bob-up", "willie-up", "both-up")

PAPER_SEC4 = """\
# Reference scenario: mu=0.01, nu=40, sigma_w^2=0 dB, sigma_b^2=-20 dB,
# R_b=0.5 bits, 2x2 ports over a 1x1 wavelength aperture at both
# terminals, P_a=20 dBm.
[link]
p_a_dbm = 20
sigma2_w_db = 0
sigma2_b_db = -20
r_b = 0.5
mu = 0.01

[bob]
n1 = 2
n2 = 2
w1 = 1.0
w2 = 1.0
nu = 40

[willie]
n1 = 2
n2 = 2
w1 = 1.0
w2 = 1.0
nu = 40

[sweep]
axis = zeta
start = 1.01
stop = 6.0
points = 50

[mc]
trials = 1000000
symbols_per_slot = 1000

[qmc]
target_abs_error = 1e-4
max_points = 1048576
shifts = 12
seed = 0

# Threshold-sweep curves: port-rich vs single-port warden at both powers.
[scenario:fas-20dbm]
link.p_a_dbm = 20

[scenario:fas-25dbm]
link.p_a_dbm = 25

[scenario:fpa-20dbm]
link.p_a_dbm = 20
willie.n1 = 1
willie.n2 = 1
willie.w1 = 0
willie.w2 = 0

[scenario:fpa-25dbm]
link.p_a_dbm = 25
willie.n1 = 1
willie.n2 = 1
willie.w1 = 0
willie.w2 = 0

# Power-sweep curves: who gets the multi-port aperture.
[scenario:fpa]
bob.n1 = 1
bob.n2 = 1
bob.w1 = 0
bob.w2 = 0
willie.n1 = 1
willie.n2 = 1
willie.w1 = 0
willie.w2 = 0

[scenario:bob-up]
willie.n1 = 1
willie.n2 = 1
willie.w1 = 0
willie.w2 = 0

[scenario:willie-up]
bob.n1 = 1
bob.n2 = 1
bob.w1 = 0
bob.w2 = 0

[scenario:both-up]
"""

PRESETS = {"paper-sec4": PAPER_SEC4}


class ConfigParseError(Exception):
    """Malformed configuration: carries a location-anchored message."""


@dataclass(frozen=True)
class Scenario:
    """A named set of baseline overrides, e.g. {'willie.n1': '1'}."""

    name: str
    overrides: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class SweepSpec:
    """One sweep family: axis, inclusive endpoints, point count, and curves."""

    axis: str
    start: float
    stop: float
    points: int
    scenarios: tuple[Scenario, ...]

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise ValueError(f"unknown sweep axis {self.axis!r}; expected one of {SWEEP_AXES}")
        if not (self.start < self.stop):
            raise ValueError("sweep start must be < stop")
        if self.points < 2:
            raise ValueError("sweep needs at least 2 points")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run: linear-scale link, both nodes, and all knobs."""

    link: LinkBudget
    bob: NodeFas
    willie: NodeFas
    zeta: float | None  # None -> evaluate at the optimal threshold
    dependence: str
    bob_kernel: str
    willie_kernel: str
    sweep: SweepSpec
    mc_trials: int
    mc_symbols_per_slot: int
    qmc: QmcSettings
    seed: int


def _line_of(text: str, section: str, key: str) -> int | None:
    in_section = False
    for ln, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if s.startswith("[") and s.endswith("]"):
            in_section = s[1:-1].strip() == section
        elif in_section and (s.split("=", 1)[0].split(":", 1)[0].strip() == key):
            return ln
    return None


class _Source:
    """One parsed INI layer; remembers origin for error anchoring."""

    def __init__(self, text: str, origin: str):
        self.text = text
        self.origin = origin
        parser = configparser.ConfigParser(interpolation=None)
        try:
            parser.read_string(text, source=origin)
        except configparser.Error as exc:
            raise ConfigParseError(str(exc)) from exc
        self.parser = parser
        for section in parser.sections():
            base = section.split(":", 1)[0]
            if base not in _KNOWN_SECTIONS and not section.startswith("scenario:"):
                raise ConfigParseError(f"{origin}: unknown section [{section}]")
        self._check_keys("link", _LINK_KEYS)
        self._check_keys("bob", _NODE_KEYS)
        self._check_keys("willie", _NODE_KEYS)
        self._check_keys("sweep", _SWEEP_KEYS)
        self._check_keys("mc", _MC_KEYS)
        self._check_keys("qmc", _QMC_KEYS)

    def _check_keys(self, section: str, allowed: set[str]) -> None:
        if not self.parser.has_section(section):
            return
        for key in self.parser[section]:
            if key not in allowed:
                ln = _line_of(self.text, section, key)
                where = f"{self.origin}:{ln}" if ln else self.origin
                raise ConfigParseError(f"{where}: unknown key {key!r} in [{section}]")

    def error(self, section: str, key: str, message: str) -> ConfigParseError:
        ln = _line_of(self.text, section, key)
        where = f"{self.origin}:{ln}" if ln else self.origin
        return ConfigParseError(f"{where}: [{section}] {key}: {message}")


class _Stack:
    """Preset and user config layered; later sources win key by key."""

    def __init__(self, sources: list[_Source]):
        self.sources = sources

    def _lookup(self, section: str, key: str):
        for src in reversed(self.sources):
            if src.parser.has_option(section, key):
                return src, src.parser.get(section, key)
        return None, None

    def get_float(self, section: str, key: str, default: float | None = None) -> float | None:
        src, raw = self._lookup(section, key)
        if raw is None:
            return default
        try:
            return float(raw)
        except ValueError:
            raise src.error(section, key, f"invalid number {raw!r}") from None

    def get_int(self, section: str, key: str, default: int | None = None) -> int | None:
        src, raw = self._lookup(section, key)
        if raw is None:
            return default
        try:
            return int(raw, 0)
        except ValueError:
            raise src.error(section, key, f"invalid integer {raw!r}") from None

    def get_choice(self, section: str, key: str, choices: tuple[str, ...], default: str) -> str:
        src, raw = self._lookup(section, key)
        if raw is None:
            return default
        raw = raw.strip()
        if raw not in choices:
            raise src.error(section, key, f"must be one of {', '.join(choices)}; got {raw!r}")
        return raw

    def get_raw(self, section: str, key: str) -> str | None:
        _, raw = self._lookup(section, key)
        return raw

    def scenario_sections(self) -> dict[str, Scenario]:
        defs: dict[str, Scenario] = {}
        for src in self.sources:  # later sources override same-named scenarios
            for section in src.parser.sections():
                if not section.startswith("scenario:"):
                    continue
                name = section.split(":", 1)[1].strip()
                overrides = dict(src.parser[section])
                for key in overrides:
                    node, _, attr = key.partition(".")
                    ok = (node == "link" and attr in _LINK_KEYS) or (
                        node in ("bob", "willie") and attr in _NODE_KEYS
                    )
                    if not ok:
                        raise src.error(section, key, "unknown scenario override")
                defs[name] = Scenario(name, overrides)
        return defs


def _build_node(stack: _Stack, section: str) -> tuple[NodeFas, str]:
    grid = PortGrid(
        n1_count=stack.get_int(section, "n1", 2),
        n2_count=stack.get_int(section, "n2", 2),
        w1=stack.get_float(section, "w1", 1.0),
        w2=stack.get_float(section, "w2", 1.0),
    )
    nu = stack.get_float(section, "nu", 40.0)
    kernel = stack.get_choice(section, "kernel", KERNELS, "jakes_j0")
    return NodeFas(grid=grid, nu=nu), kernel


def load_config(
    config_text: str | None = None,
    preset: str | None = None,
    seed_override: int | None = None,
    origin: str = "<config>",
) -> RunConfig:
    """Resolve preset and/or user config text into a :class:`RunConfig`.

    With neither argument the paper-sec4 preset applies.  Raises
    :class:`ConfigParseError` for malformed input and ``ValueError`` for
    invariant violations.
    """
    sources: list[_Source] = []
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigParseError(
                f"unknown preset {preset!r}; available: {', '.join(sorted(PRESETS))}"
            )
        sources.append(_Source(PRESETS[preset], f"<preset:{preset}>"))
    if config_text is not None:
        sources.append(_Source(config_text, origin))
    if not sources:
        sources.append(_Source(PRESETS["paper-sec4"], "<preset:paper-sec4>"))
    stack = _Stack(sources)

    link = LinkBudget(
        p_a=dbm_to_watts(stack.get_float("link", "p_a_dbm", 20.0)),
        sigma2_w=db_to_linear(stack.get_float("link", "sigma2_w_db", 0.0)),
        sigma2_b=db_to_linear(stack.get_float("link", "sigma2_b_db", -20.0)),
        r_b=stack.get_float("link", "r_b", 0.5),
        mu=stack.get_float("link", "mu", 0.01),
    )
    zeta = stack.get_float("link", "zeta", None)
    dependence = stack.get_choice("link", "dependence", DEPENDENCE_MODES, "field_rho")
    bob, bob_kernel = _build_node(stack, "bob")
    willie, willie_kernel = _build_node(stack, "willie")

    axis = stack.get_choice("sweep", "axis", SWEEP_AXES, "zeta")
    defs = stack.scenario_sections()
    names_raw = stack.get_raw("sweep", "scenarios")
    if names_raw is not None:
        names = [n.strip() for n in names_raw.split(",") if n.strip()]
        missing = [n for n in names if n not in defs and n != "base"]
        if missing:
            raise ConfigParseError(f"undefined scenarios in [sweep]: {', '.join(missing)}")
    else:
        wanted = (
            _ZETA_DEFAULT_SCENARIOS
            if axis == "zeta"
            else _POWER_DEFAULT_SCENARIOS
            if axis == "p_a_dbm"
            else ()
        )
        names = [n for n in wanted if n in defs] or ["base"]
    scenarios = tuple(defs.get(n, Scenario(n)) for n in names)

    sweep = SweepSpec(
        axis=axis,
        start=stack.get_float("sweep", "start", 1.01),
        stop=stack.get_float("sweep", "stop", 6.0),
        points=stack.get_int("sweep", "points", 50),
        scenarios=scenarios,
    )

    qmc = QmcSettings(
        target_abs_error=stack.get_float("qmc", "target_abs_error", 1e-4),
        max_points=stack.get_int("qmc", "max_points", 2**20),
        shifts=stack.get_int("qmc", "shifts", 12),
        seed=seed_override if seed_override is not None else stack.get_int("qmc", "seed", 0),
    )
    mc_trials = stack.get_int("mc", "trials", 10**6)
    mc_symbols = stack.get_int("mc", "symbols_per_slot", 1000)
    if mc_trials < 1:
        raise ValueError("mc trials must be >= 1")
    if mc_symbols < 1:
        raise ValueError("mc symbols_per_slot must be >= 1")

    return RunConfig(
        link=link,
        bob=bob,
        willie=willie,
        zeta=zeta,
        dependence=dependence,
        bob_kernel=bob_kernel,
        willie_kernel=willie_kernel,
        sweep=sweep,
        mc_trials=mc_trials,
        mc_symbols_per_slot=mc_symbols,
        qmc=qmc,
        seed=qmc.seed,
    )


def apply_scenario(cfg: RunConfig, scenario: Scenario) -> RunConfig:
    """Overlay one scenario's ``node.key`` overrides onto a resolved config."""
    link_kw: dict[str, float] = {}
    zeta = cfg.zeta
    nodes = {"bob": cfg.bob, "willie": cfg.willie}
    kernels = {"bob": cfg.bob_kernel, "willie": cfg.willie_kernel}
    dependence = cfg.dependence
    for key, raw in scenario.overrides.items():
        node, _, attr = key.partition(".")
        if node == "link":
            if attr == "dependence":
                if raw not in DEPENDENCE_MODES:
                    raise ValueError(f"scenario {scenario.name}: bad dependence {raw!r}")
                dependence = raw
                continue
            try:
                val = float(raw)
            except ValueError:
                raise ConfigParseError(
                    f"scenario {scenario.name}: {key}: invalid number {raw!r}"
                ) from None
            if attr == "p_a_dbm":
                link_kw["p_a"] = dbm_to_watts(val)
            elif attr == "sigma2_w_db":
                link_kw["sigma2_w"] = db_to_linear(val)
            elif attr == "sigma2_b_db":
                link_kw["sigma2_b"] = db_to_linear(val)
            elif attr == "zeta":
                zeta = val
            else:  # r_b, mu
                link_kw[attr] = val
        else:
            if attr == "kernel":
                if raw not in KERNELS:
                    raise ValueError(f"scenario {scenario.name}: bad kernel {raw!r}")
                kernels[node] = raw
                continue
            base = nodes[node]
            try:
                val = int(raw, 0) if attr in ("n1", "n2") else float(raw)
            except ValueError:
                raise ConfigParseError(
                    f"scenario {scenario.name}: {key}: invalid number {raw!r}"
                ) from None
            grid_kw = {
                "n1_count": base.grid.n1_count,
                "n2_count": base.grid.n2_count,
                "w1": base.grid.w1,
                "w2": base.grid.w2,
            }
            if attr == "nu":
                nodes[node] = NodeFas(grid=base.grid, nu=val)
                continue
            grid_kw["n1_count" if attr == "n1" else "n2_count" if attr == "n2" else attr] = val
            nodes[node] = NodeFas(grid=PortGrid(**grid_kw), nu=base.nu)
    link = replace(cfg.link, **link_kw) if link_kw else cfg.link
    return replace(
        cfg,
        link=link,
        zeta=zeta,
        bob=nodes["bob"],
        willie=nodes["willie"],
        bob_kernel=kernels["bob"],
        willie_kernel=kernels["willie"],
        dependence=dependence,
    )


def preset_text(name: str) -> str:
    if name not in PRESETS:
        raise ConfigParseError(f"unknown preset {name!r}")
    return PRESETS[name]
