"""Run configuration: plain-text key=value blocks with explicit units.

The file format is INI-style sections; every key carries its unit in the
name (``L_y_bohr``, ``theta_deg``, ...).  Serialization is canonical (fixed
section and key order, shortest round-trip float repr), so save -> load ->
save is bit-identical and the SHA-256 of the canonical text is a stable
configuration hash carried on every output file.
"""

import configparser
import hashlib
import io
from dataclasses import dataclass, field, fields

import numpy as np

from .molecule import (ANGSTROM_TO_BOHR, AtomicOrbital, MoleculeABA,
                       DEFAULT_EPS_A, DEFAULT_EPS_B, DEFAULT_Q_A, DEFAULT_Q_B)
from .pulse import LaserPulse
from .grid import Grid2D


class ConfigError(ValueError):
    """Malformed or inconsistent configuration (CLI exit code 2)."""


@dataclass
class GridBlock:
    n_y: int = 1024
    n_z: int = 1024
    L_y_bohr: float = 300.0
    L_z_bohr: float = 300.0


@dataclass
class MoleculeBlock:
    R: float = 3.0
    unit: str = "angstrom"            # angstrom | bohr
    q_A: float = DEFAULT_Q_A
    q_B: float = DEFAULT_Q_B
    eps_A_bohr: float = DEFAULT_EPS_A
    eps_B_bohr: float = DEFAULT_EPS_B
    ao_kind: str = "gaussian"         # gaussian | slater
    sigma_bohr: float = 1.0
    zeta: float = 1.0
    a: str = "auto"                   # auto or a float literal
    b: str = "auto"

    @property
    def R_bohr(self):
        if self.unit == "angstrom":
            return self.R * ANGSTROM_TO_BOHR
        if self.unit == "bohr":
            return self.R
        raise ConfigError(f"unknown length unit {self.unit!r}")


@dataclass
class PulseBlock:
    lambda_nm: float = 800.0          # 0 disables; then omega_au must be set
    omega_au: float = 0.0
    intensity_Wcm2: float = 1e14      # 0 disables; then E0_au must be set
    E0_au: float = 0.0
    n_cycles: int = 3
    envelope: str = "sin2"
    cep_rad: float = 1.5707963267948966  # sine carrier: F(T)=0 and G(T)!=0 for all n_cycles
    theta_deg: float = 0.0


@dataclass
class PropagationBlock:
    dt_au: float = 0.05
    mask_width_bohr: float = 40.0
    mask_power: float = 0.125
    record_stride: int = 200
    initial_state: str = "relaxed"    # relaxed | lcao
    store_channels: bool = False


@dataclass
class SpectrumBlock:
    r0_bohr: float = 36.0
    smooth_width_bohr: float = 8.0
    k_min_au: float = 0.0             # 0 -> auto: 1.2 sqrt(2 U_p)
    t_extract_frac: float = 0.72
    drift_correction: bool = True


@dataclass
class AlignmentBlock:
    fwhm_deg: float = 10.0
    n_samples: int = 9
    span_factor: float = 1.5
    theta_bars_deg: str = "0,1,5,10,45,90"


@dataclass
class RunBlock:
    seed: int = 0
    out_dir: str = "runs"
    threads: int = 1
    preset: str = ""


_BLOCKS = (("grid", GridBlock), ("molecule", MoleculeBlock),
           ("pulse", PulseBlock), ("propagation", PropagationBlock),
           ("spectrum", SpectrumBlock), ("alignment", AlignmentBlock),
           ("run", RunBlock))


@dataclass
class RunConfig:
    grid: GridBlock = field(default_factory=GridBlock)
    molecule: MoleculeBlock = field(default_factory=MoleculeBlock)
    pulse: PulseBlock = field(default_factory=PulseBlock)
    propagation: PropagationBlock = field(default_factory=PropagationBlock)
    spectrum: SpectrumBlock = field(default_factory=SpectrumBlock)
    alignment: AlignmentBlock = field(default_factory=AlignmentBlock)
    run: RunBlock = field(default_factory=RunBlock)

    # -- serialization -----------------------------------------------------
    def to_text(self):
        lines = []
        for name, _ in _BLOCKS:
            block = getattr(self, name)
            lines.append(f"[{name}]")
            for f in fields(block):
                lines.append(f"{f.name} = {_format(getattr(block, f.name))}")
            lines.append("")
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text, base=None):
        """Parse a config; keys not present fall back to `base` (or defaults)."""
        import copy
        parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise ConfigError(f"cannot parse config: {exc}") from exc
        cfg = copy.deepcopy(base) if base is not None else cls()
        for name, block_cls in _BLOCKS:
            if not parser.has_section(name):
                continue
            block = getattr(cfg, name)
            known = {f.name: f for f in fields(block_cls)}
            for key, raw in parser.items(name):
                if key not in known:
                    raise ConfigError(f"unknown key [{name}] {key}")
                setattr(block, key, _parse(raw, getattr(block, key)))
        cfg.validate()
        return cfg

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_text())

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_text(fh.read())

    def hash(self):
        return hashlib.sha256(self.to_text().encode()).hexdigest()[:16]

    # -- validation and object builders ------------------------------------
    def validate(self):
        m = self.molecule
        if m.unit not in ("angstrom", "bohr"):
            raise ConfigError(f"molecule unit must be angstrom or bohr, got {m.unit!r}")
        if m.ao_kind not in ("gaussian", "slater"):
            raise ConfigError(f"unknown ao_kind {m.ao_kind!r}")
        if self.pulse.envelope not in ("sin2", "const"):
            raise ConfigError(f"unknown envelope {self.pulse.envelope!r}")
        if self.pulse.lambda_nm <= 0 and self.pulse.omega_au <= 0:
            raise ConfigError("pulse needs lambda_nm or omega_au")
        if self.pulse.intensity_Wcm2 <= 0 and self.pulse.E0_au <= 0:
            raise ConfigError("pulse needs intensity_Wcm2 or E0_au")
        if not 0.0 < self.spectrum.t_extract_frac <= 1.0:
            raise ConfigError("t_extract_frac must be in (0, 1]")
        if self.propagation.dt_au <= 0:
            raise ConfigError("dt_au must be positive")
        for v in (m.a, m.b):
            if v != "auto":
                try:
                    float(v)
                except ValueError:
                    raise ConfigError(f"LCAO coefficient must be 'auto' or a number, got {v!r}")
        g = self.grid
        for n in (g.n_y, g.n_z):
            if n < 2 or (n & (n - 1)):
                raise ConfigError("grid counts must be powers of two")

    def make_grid(self):
        g = self.grid
        return Grid2D(g.n_y, g.n_z, g.L_y_bohr, g.L_z_bohr)

    def make_molecule(self):
        m = self.molecule
        return MoleculeABA(R=m.R_bohr, q_A=m.q_A, q_B=m.q_B,
                           eps_A=m.eps_A_bohr, eps_B=m.eps_B_bohr)

    def make_ao(self):
        m = self.molecule
        return AtomicOrbital(kind=m.ao_kind, sigma=m.sigma_bohr, zeta=m.zeta)

    def make_pulse(self, theta=None):
        p = self.pulse
        theta_rad = np.radians(p.theta_deg) if theta is None else theta
        return LaserPulse.from_experiment(
            wavelength_nm=p.lambda_nm if p.lambda_nm > 0 else None,
            omega=p.omega_au if p.omega_au > 0 else None,
            intensity_Wcm2=p.intensity_Wcm2 if p.intensity_Wcm2 > 0 else None,
            E0=p.E0_au if p.E0_au > 0 else None,
            n_cycles=p.n_cycles, envelope=p.envelope, cep=p.cep_rad,
            theta=theta_rad)

    def k_min(self, pulse=None):
        if self.spectrum.k_min_au > 0:
            return self.spectrum.k_min_au
        pulse = pulse if pulse is not None else self.make_pulse()
        return 1.2 * np.sqrt(2.0 * pulse.ponderomotive_energy)

    def lcao_pair(self):
        m = self.molecule
        if m.a == "auto" or m.b == "auto":
            return "auto", "auto"
        return float(m.a), float(m.b)


def _format(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse(raw, current):
    raw = raw.strip()
    try:
        if isinstance(current, bool):
            if raw.lower() in ("true", "1", "yes"):
                return True
            if raw.lower() in ("false", "0", "no"):
                return False
            raise ValueError(raw)
        if isinstance(current, int):
            return int(raw)
        if isinstance(current, float):
            return float(raw)
        return raw
    except ValueError as exc:
        raise ConfigError(f"cannot parse value {raw!r}") from exc


# -- presets ----------------------------------------------------------------

def preset(name):
    """Named configurations for the standard experiments."""
    cfg = RunConfig()
    if name == "desk-800nm":
        pass  # the defaults above *are* the desk preset (R = 3.0 A)
    elif name == "desk-800nm-r5":
        cfg.molecule.R = 5.0
    elif name == "fast-512":
        cfg.grid = GridBlock(n_y=512, n_z=512, L_y_bohr=150.0, L_z_bohr=150.0)
        cfg.propagation.mask_width_bohr = 25.0
        cfg.spectrum = SpectrumBlock(r0_bohr=30.0, smooth_width_bohr=6.0,
                                     t_extract_frac=0.60)
    elif name == "paper-2100nm":
        cfg.grid = GridBlock(n_y=2048, n_z=2048, L_y_bohr=400.0, L_z_bohr=400.0)
        cfg.pulse.lambda_nm = 2100.0
        cfg.propagation.dt_au = 0.1
        cfg.spectrum = SpectrumBlock(r0_bohr=140.0, smooth_width_bohr=20.0,
                                     t_extract_frac=0.60)
    elif name == "paper-2100nm-r5":
        cfg = preset("paper-2100nm")
        cfg.molecule.R = 5.0
    elif name == "mini-128":
        cfg.grid = GridBlock(n_y=128, n_z=128, L_y_bohr=40.0, L_z_bohr=40.0)
        cfg.pulse.n_cycles = 1
        cfg.propagation = PropagationBlock(dt_au=0.05, mask_width_bohr=10.0,
                                           record_stride=100,
                                           initial_state="lcao")
        cfg.spectrum = SpectrumBlock(r0_bohr=12.0, smooth_width_bohr=4.0,
                                     t_extract_frac=1.0)
    else:
        raise ConfigError(f"unknown preset {name!r}")
    cfg.run.preset = name
    return cfg


PRESETS = ("desk-800nm", "desk-800nm-r5", "fast-512", "paper-2100nm",
           "paper-2100nm-r5", "mini-128")
