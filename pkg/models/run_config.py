"""
Run configuration model for the command-line surface
"""
import math
from pathlib import Path
from typing import Any, Dict, Literal, Optional

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from config.settings import Settings
from dirac.numerics import RadialGrid
from dirac.solutions import CLASSES, CoulombParams, MorseParams, ZeroEnergyParams, oscillator_branch
from dirac.xpct import FAMILIES

COMMANDS = ("spectrum", "wavefunction", "verify", "xpct")
SUITES = ("residuals", "spectra", "algebra", "xpct", "so21")


class GridSpec(BaseModel):
    """
    Grid request, written as mapping:N:r_min:r_max on the command line

    Attributes:
        mapping: "uniform" or "log"
        n_points: Interior points
        r_min: Left end
        r_max: Right end
    """
    model_config = ConfigDict(frozen=True)

    mapping: Literal["uniform", "log"] = "uniform"
    n_points: int
    r_min: float = 0.0
    r_max: float

    @field_validator('n_points')
    @classmethod
    def validate_size(cls, v: int) -> int:
        if v < Settings.MIN_GRID_POINTS:
            raise ValueError(f"grid needs at least {Settings.MIN_GRID_POINTS} points, got {v}")
        return v

    @model_validator(mode='after')
    def validate_interval(self) -> 'GridSpec':
        if not (math.isfinite(self.r_min) and math.isfinite(self.r_max) and self.r_max > self.r_min):
            raise ValueError(f"grid interval ({self.r_min}, {self.r_max}) is empty")
        if self.mapping == "log" and self.r_min <= 0.0:
            raise ValueError("a log grid needs r_min > 0")
        return self

    @classmethod
    def parse(cls, text: str) -> 'GridSpec':
        """'uniform:4000:0:12' or 'log:4000:1e-6:400'"""
        text = text.strip()
        if not text:
            raise ValueError("grid required")
        parts = text.split(":")
        if len(parts) != 4:
            raise ValueError(f"grid must be mapping:N:r_min:r_max, got '{text}'")
        mapping, n_points, r_min, r_max = parts
        return cls(mapping=mapping, n_points=int(n_points), r_min=float(r_min), r_max=float(r_max))

    @classmethod
    def default_for(cls, class_name: str) -> 'GridSpec':
        mapping, n_points, r_min, r_max = Settings.DEFAULT_GRIDS[class_name]
        return cls(mapping=mapping, n_points=n_points, r_min=r_min, r_max=r_max)

    def to_grid(self) -> RadialGrid:
        return RadialGrid(self.mapping, self.n_points, self.r_max, self.r_min)

    def __str__(self) -> str:
        return f"{self.mapping}:{self.n_points}:{self.r_min:g}:{self.r_max:g}"


class RunConfig(BaseModel):
    """
    Validated parameters of one CLI invocation

    Values come from the run file first and the command line second; every
    class admissibility rule is checked before any computation starts.
    """
    model_config = ConfigDict(extra="forbid")

    command: Literal["spectrum", "wavefunction", "verify", "xpct"]
    class_name: Optional[str] = None
    alpha: float = 1.0
    lam: float = 1.0
    kappa: Optional[float] = None
    Z: float = 0.0
    tau: float = 1.0
    rho: float = 0.0
    beta: Optional[float] = None
    l: int = 0
    branch: int = 1
    n: int = 0
    nmin: int = 0
    nmax: int = 5
    grid: Optional[GridSpec] = None
    out: Optional[Path] = None
    format: Literal["csv", "json"] = "csv"
    suite: str = "all"
    tolerances: Dict[str, float] = {}
    family: Optional[str] = None
    kappa_hat: Optional[float] = None
    mu: Optional[float] = None

    @field_validator('class_name')
    @classmethod
    def validate_class(cls, v: Optional[str]) -> Optional[str]:
        if v is not None and v not in CLASSES:
            raise ValueError(f"unknown class '{v}', expected one of {', '.join(CLASSES)}")
        return v

    @field_validator('suite')
    @classmethod
    def validate_suite(cls, v: str) -> str:
        if v != "all" and v not in SUITES:
            raise ValueError(f"unknown suite '{v}', expected all or one of {', '.join(SUITES)}")
        return v

    @field_validator('family')
    @classmethod
    def validate_family(cls, v: Optional[str]) -> Optional[str]:
        if v is not None and v not in FAMILIES:
            raise ValueError(f"unknown family '{v}', expected one of {', '.join(FAMILIES)}")
        return v

    @field_validator('grid', mode='before')
    @classmethod
    def parse_grid(cls, v: Any) -> Any:
        if isinstance(v, str):
            return GridSpec.parse(v)
        return v

    @field_validator('tolerances', mode='before')
    @classmethod
    def parse_tolerances(cls, v: Any) -> Any:
        """'residual:1e-9,ladder:1e-7' from a run file"""
        if isinstance(v, str):
            pairs = [item.split(":", 1) for item in v.split(",") if item.strip()]
            v = {key.strip(): float(value) for key, value in pairs}
        for key in v:
            if key not in Settings.TOLERANCES:
                raise ValueError(f"unknown tolerance '{key}'")
        return v

    @field_validator('alpha', 'lam', 'tau')
    @classmethod
    def validate_positive(cls, v: float) -> float:
        if not (math.isfinite(v) and v > 0.0):
            raise ValueError(f"must be positive and finite, got {v}")
        return v

    @model_validator(mode='after')
    def validate_command(self) -> 'RunConfig':
        if self.command in ("spectrum", "wavefunction"):
            if self.class_name is None:
                raise ValueError(f"{self.command} needs --class")
            self._check_class_params()
        if self.command == "wavefunction" and self.grid is None:
            raise ValueError("grid required")
        if self.command == "spectrum" and self.nmax < self.nmin:
            raise ValueError(f"nmax = {self.nmax} is below nmin = {self.nmin}")
        if self.command == "xpct" and self.family is None:
            raise ValueError("xpct needs --family")
        return self

    def _check_class_params(self):
        """Class admissibility rules; library errors are ValueErrors"""
        if self.class_name in ("oscillator", "coulomb") and self.kappa is None:
            raise ValueError(f"{self.class_name} needs --kappa")
        if self.class_name == "oscillator":
            oscillator_branch(self.kappa)
        elif self.class_name == "coulomb":
            CoulombParams(self.Z, self.kappa, self.alpha, self.branch)
        elif self.class_name == "morse":
            MorseParams(self.tau, self.rho, self.lam, self.alpha)
        elif self.class_name == "zero-energy":
            if self.beta is None:
                raise ValueError("zero-energy needs --beta")
            ZeroEnergyParams(self.beta, self.lam, self.l)

    def class_params(self) -> Dict[str, Any]:
        """Keyword parameters for dirac.solutions.solution_builder"""
        if self.class_name == "oscillator":
            return {"kappa": int(self.kappa), "lam": self.lam, "alpha": self.alpha}
        if self.class_name == "coulomb":
            return {"kappa": int(self.kappa), "Z": self.Z, "alpha": self.alpha, "branch": self.branch}
        if self.class_name == "morse":
            return {"tau": self.tau, "rho": self.rho, "lam": self.lam, "alpha": self.alpha}
        return {"l": self.l, "beta": self.beta, "lam": self.lam, "alpha": self.alpha}

    def summary(self) -> Dict[str, Any]:
        """Fields that were set, for logging"""
        return {k: str(v) for k, v in self.model_dump(exclude_none=True).items()}
