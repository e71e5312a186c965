"""Value types shared by the model, analysis and sweep layers."""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np
import structlog

from exceptions import ConfigurationError

logger = structlog.get_logger(__name__)


class ModelKind(str, Enum):
    DICKE_MF = 'dicke_mf'
    LOM = 'lom'
    NOM = 'nom'
    LMG = 'lmg'

    @property
    def is_dicke(self):
        return self is not ModelKind.LMG

    @property
    def is_oscillator(self):
        return self in (ModelKind.LOM, ModelKind.NOM)

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            choices = ', '.join(kind.value for kind in cls)
            raise ConfigurationError(f'unknown model {value!r} (choose from {choices})') from None


@dataclass(frozen=True)
class DriveSpec:
    """Periodically modulated parameter ``base * (1 + amplitude * sin(frequency * t))``."""

    base: float
    amplitude: float = 0.0
    frequency: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.base) and math.isfinite(self.amplitude) and math.isfinite(self.frequency)):
            raise ConfigurationError('drive values must be finite')
        if self.amplitude < 0:
            raise ConfigurationError(f'drive amplitude must be >= 0, got {self.amplitude}')
        if self.amplitude > 0 and self.frequency <= 0:
            raise ConfigurationError(f'drive frequency must be > 0 when driven, got {self.frequency}')
        if self.amplitude > 1:
            logger.warning('drive_amplitude_flagged', amplitude=self.amplitude)

    @property
    def is_driven(self):
        return self.amplitude > 0


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float = 1e-3
    t_final: float = 1000.0
    stride: int = 10
    divergence_cutoff: float = 1e6
    t0: float = 0.0

    def __post_init__(self):
        if not self.dt > 0:
            raise ConfigurationError(f'dt must be > 0, got {self.dt}')
        if not self.t_final > self.t0:
            raise ConfigurationError(f't_final must exceed t0 ({self.t0}), got {self.t_final}')
        if int(self.stride) != self.stride or self.stride < 1:
            raise ConfigurationError(f'stride must be a positive integer, got {self.stride}')
        if not self.divergence_cutoff > 1:
            raise ConfigurationError(f'divergence_cutoff must be > 1, got {self.divergence_cutoff}')

    @property
    def n_steps(self):
        exact = (self.t_final - self.t0) / self.dt
        nearest = round(exact)
        # t_final = k*dt should give k steps even when the division lands just below k
        if abs(exact - nearest) < 1e-6:
            return int(nearest)
        return int(math.floor(exact))

    @property
    def n_samples(self):
        return self.n_steps // int(self.stride) + 1

    @property
    def sample_dt(self):
        return self.dt * int(self.stride)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Uniformly sampled states; sample k sits at ``t0 + k*stride*dt``."""

    samples: np.ndarray
    t0: float
    dt: float
    stride: int
    model_id: str
    components: Tuple[str, ...] = ()
    diverged: bool = False
    truncation_index: Optional[int] = None

    def __len__(self):
        return self.samples.shape[0]

    @property
    def sample_dt(self):
        return self.dt * self.stride

    @property
    def times(self):
        steps = np.arange(len(self), dtype=np.int64) * self.stride
        return self.t0 + steps * self.dt

    @property
    def t_end(self):
        return self.t0 + (len(self) - 1) * self.stride * self.dt

    def component(self, name):
        try:
            return self.samples[:, self.components.index(name)]
        except ValueError:
            raise KeyError(name) from None


@dataclass(frozen=True)
class DickeParams:
    """Open Dicke / oscillator-model parameters; the drive modulates g0 = g_ratio * g_c."""

    omega: float = 1.0
    omega0: float = 1.0
    kappa: float = 0.0
    g_ratio: float = 0.9
    amplitude: float = 0.0
    drive_frequency: float = 1.0

    def __post_init__(self):
        if not (self.omega > 0 and self.omega0 > 0):
            raise ConfigurationError('omega and omega0 must be > 0')
        if not self.kappa >= 0:
            raise ConfigurationError(f'kappa must be >= 0, got {self.kappa}')
        if not self.g_ratio > 0:
            raise ConfigurationError(f'g_ratio must be > 0, got {self.g_ratio}')
        if self.g_ratio >= 1:
            logger.warning('normal_phase_expansion_invalid', g_ratio=self.g_ratio)
        # validates amplitude/frequency
        self.drive  # noqa: B018

    @property
    def g_c(self):
        return 0.5 * math.sqrt((self.omega0 / self.omega) * (self.kappa ** 2 + self.omega ** 2))

    @property
    def g0(self):
        return self.g_ratio * self.g_c

    @property
    def drive(self):
        return DriveSpec(base=self.g0, amplitude=self.amplitude, frequency=self.drive_frequency)

    def as_array(self):
        return np.array([self.omega, self.omega0, self.kappa, self.g0,
                         self.amplitude, self.drive_frequency], dtype=np.float64)


@dataclass(frozen=True)
class DickeMfState:
    alpha_re: float
    alpha_im: float
    sx: float
    sy: float
    sz: float

    @property
    def alpha(self):
        return complex(self.alpha_re, self.alpha_im)

    def as_array(self):
        return np.array([self.alpha_re, self.alpha_im, self.sx, self.sy, self.sz], dtype=np.float64)

    @classmethod
    def from_array(cls, values):
        return cls(*(float(v) for v in values))


@dataclass(frozen=True)
class OmState:
    alpha_re: float
    alpha_im: float
    beta_re: float
    beta_im: float

    @property
    def alpha(self):
        return complex(self.alpha_re, self.alpha_im)

    @property
    def beta(self):
        return complex(self.beta_re, self.beta_im)

    def as_array(self):
        return np.array([self.alpha_re, self.alpha_im, self.beta_re, self.beta_im], dtype=np.float64)

    @classmethod
    def from_array(cls, values):
        return cls(*(float(v) for v in values))


@dataclass(frozen=True)
class LmgParams:
    """Open anisotropic LMG parameters; the drive modulates lambda0."""

    omega0: float = 1.0
    lambda0: float = 0.8
    gamma: float = 0.0
    Gamma: float = 0.0
    amplitude: float = 0.0
    drive_frequency: float = 1.0

    def __post_init__(self):
        if not self.omega0 > 0:
            raise ConfigurationError(f'omega0 must be > 0, got {self.omega0}')
        if not -1.0 <= self.gamma <= 1.0:
            raise ConfigurationError(f'gamma must lie in [-1, 1], got {self.gamma}')
        if not self.Gamma >= 0:
            raise ConfigurationError(f'Gamma must be >= 0, got {self.Gamma}')
        self.drive  # noqa: B018

    @property
    def drive(self):
        return DriveSpec(base=self.lambda0, amplitude=self.amplitude, frequency=self.drive_frequency)

    @property
    def gamma_plus(self):
        return 1.0 + self.gamma

    @property
    def gamma_minus(self):
        return 1.0 - self.gamma

    def as_array(self):
        return np.array([self.omega0, self.lambda0, self.gamma, self.Gamma,
                         self.amplitude, self.drive_frequency], dtype=np.float64)


@dataclass(frozen=True)
class LmgState:
    X: float
    Y: float
    Z: float

    @property
    def norm(self):
        return math.sqrt(self.X ** 2 + self.Y ** 2 + self.Z ** 2)

    def as_array(self):
        return np.array([self.X, self.Y, self.Z], dtype=np.float64)

    @classmethod
    def from_array(cls, values):
        return cls(*(float(v) for v in values))


@dataclass(frozen=True)
class LmgSteadyState:
    branch: int
    Xs: float
    Ys: float
    Zs: float
    Lambda: float

    def as_state(self):
        return LmgState(self.Xs, self.Ys, self.Zs)


@dataclass(frozen=True)
class LmgSteadyStates:
    normal: LmgState = LmgState(0.0, 0.0, -1.0)
    branches: Tuple[LmgSteadyState, ...] = field(default_factory=tuple)
    reason: Optional[str] = None

    @property
    def symmetry_broken(self):
        return bool(self.branches)
