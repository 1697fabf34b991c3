"""Dimensionless system parameters, Fock cutoffs and regime diagnostics.

Every rate and coupling is measured in units of the mechanical frequency,
so ``omega == 1`` throughout the package.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

OMEGA = 1.0


class ConfigError(ValueError):
    """Raised for malformed configuration files or invalid parameter values."""


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters of the driven optomechanical cavity.

    Attributes
    ----------
    delta : float
        Cavity-laser detuning.
    epsilon : float
        Drive amplitude.
    g : float
        Single-photon optomechanical coupling.
    kappa_a, kappa_b : float
        Cavity and mechanical damping rates.
    nbar : float
        Thermal phonon occupation of the mechanical bath.
    """

    delta: float
    epsilon: float
    g: float
    kappa_a: float
    kappa_b: float
    nbar: float

    def __post_init__(self):
        for name in ("delta", "epsilon", "g", "kappa_a", "kappa_b", "nbar"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ConfigError(f"{name} must be finite, got {value!r}")
        for name in ("epsilon", "g", "nbar"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be non-negative")
        for name in ("kappa_a", "kappa_b"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")

    def chi(self) -> float:
        """Polaron displacement per photon, g / omega."""
        return self.g / OMEGA

    def replace(self, **changes) -> "SystemParams":
        fields = {k: getattr(self, k) for k in self.__dataclass_fields__}
        if "chi" in changes:
            changes["g"] = changes.pop("chi") * OMEGA
        fields.update(changes)
        return SystemParams(**fields)


@dataclass(frozen=True)
class FockCutoffs:
    """Photon and phonon truncation levels (inclusive)."""

    n_max: int
    m_max: int

    def __post_init__(self):
        if int(self.n_max) != self.n_max or int(self.m_max) != self.m_max:
            raise ConfigError("cutoffs must be integers")
        if self.n_max < 0 or self.m_max < 0:
            raise ConfigError("cutoffs must be non-negative")

    @property
    def n_dim(self) -> int:
        return self.n_max + 1

    @property
    def m_dim(self) -> int:
        return self.m_max + 1

    @property
    def dim(self) -> int:
        return self.n_dim * self.m_dim

    def index(self, n: int, m: int) -> int:
        """Product-basis index; the phonon label runs fastest."""
        return n * self.m_dim + m

    def grow(self, dn: int, dm: int) -> "FockCutoffs":
        return FockCutoffs(self.n_max + dn, self.m_max + dm)


def check_order(N: int) -> int:
    if int(N) != N or N < 0:
        raise ConfigError(f"expansion order must be a non-negative integer, got {N!r}")
    return int(N)


# Reference parameter set for the Kerr-comb sweeps.
FIG1 = SystemParams(delta=0.05, epsilon=0.02, g=0.1, kappa_a=2e-3, kappa_b=2e-5, nbar=1.0)


def validate_regime(params: SystemParams) -> list[str]:
    """Return human-readable warnings for violated dispersive-regime assumptions.

    The checks are soft: parameters outside the regime are still usable,
    the list only flags where the secular multiphonon model is questionable.
    """
    warnings = []
    g, eps, delta = params.g, params.epsilon, params.delta
    if not (OMEGA > g > eps):
        warnings.append(
            f"ordering: expected omega > g > epsilon, got g={g:g}, epsilon={eps:g}"
        )
    window = max(params.kappa_a, 10.0 * g * g)
    for k in range(1, math.ceil(abs(delta)) + 3):
        for sign in (+1, -1):
            gap = abs(delta + sign * k * OMEGA)
            if gap <= window:
                warnings.append(
                    f"resonance: |delta {'+' if sign > 0 else '-'} {k}*omega| = {gap:g}"
                    f" is within {window:g} of a mechanical sideband"
                )
    for name in ("kappa_a", "kappa_b"):
        if getattr(params, name) >= 0.1 * OMEGA:
            warnings.append(f"damping: {name}={getattr(params, name):g} is not << omega")
    if abs(delta) >= OMEGA:
        warnings.append(f"detuning: |delta|={abs(delta):g} is not << omega")
    return warnings


_FLOAT_KEYS = ("delta", "epsilon", "g", "kappa_a", "kappa_b", "nbar")
_INT_KEYS = ("n_max", "m_max", "order_N")


@dataclass(frozen=True)
class RunConfig:
    """Parsed configuration; ``cutoffs`` is ``None`` when neither cutoff is given."""

    params: SystemParams
    cutoffs: FockCutoffs | None
    order: int


def parse_config(text: str) -> RunConfig:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _FLOAT_KEYS + _INT_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = int(value) if key in _INT_KEYS else float(value)
        except ValueError:
            raise ConfigError(f"line {lineno}: bad value for {key}: {value!r}") from None
    missing = [k for k in _FLOAT_KEYS if k not in values]
    if missing:
        raise ConfigError(f"missing keys: {', '.join(missing)}")
    params = SystemParams(**{k: values[k] for k in _FLOAT_KEYS})
    if ("n_max" in values) != ("m_max" in values):
        raise ConfigError("give both n_max and m_max, or neither for automatic cutoffs")
    cutoffs = FockCutoffs(values["n_max"], values["m_max"]) if "n_max" in values else None
    order = check_order(values.get("order_N", 1))
    return RunConfig(params, cutoffs, order)


def load_config(path) -> RunConfig:
    return parse_config(Path(path).read_text())
