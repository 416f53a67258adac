"""
Request and response models for the walk endpoints.

Angles are in units of π on the wire, as everywhere outside the kernel.
"""
import math
from typing import Annotated, List, Optional

from pydantic import BaseModel, Field

from app.core.config import settings
from app.walk.lattice import Coin
from app.walk.observables import Normalization
from app.walk.operators import WalkParams


class AngleParams(BaseModel):
    alpha: float = Field(description="α in units of π")
    beta: float = Field(description="β in units of π")
    l1: float = Field(default=1.0, ge=0.0, le=1.0)
    l2: float = Field(default=1.0, ge=0.0, le=1.0)

    def to_params(self, steps: int = 0) -> WalkParams:
        return WalkParams(alpha=self.alpha * math.pi, beta=self.beta * math.pi,
                          l1=self.l1, l2=self.l2, steps=steps)


class EvolveRequest(AngleParams):
    t: int = Field(default=settings.default_steps, ge=1, le=settings.api_max_steps)
    coin: Coin = Coin.UP
    normalization: Normalization = Normalization.POSTSELECT


class ObservableOut(BaseModel):
    t: int
    M1: float
    M2: float
    variance: float
    D: Optional[float]
    entropy_bits: float
    surviving_norm: float


class EvolveResponse(BaseModel):
    records: List[ObservableOut]
    final_distribution: List[List[float]] = Field(description="[position, probability] pairs, nonzero only")


class WindingOut(BaseModel):
    alpha: float
    beta: float
    W: Optional[int]
    raw_integral: Optional[float]
    residual: Optional[float]
    num_k: int
    gap_zero: float
    gap_pi: float
    boundary: bool


class GapOut(BaseModel):
    alpha: float
    beta: float
    gap_zero: float
    gap_pi: float


class SpectrumRequest(AngleParams):
    num_k: int = Field(default=settings.default_num_k, ge=2, le=65536)


class SpectrumOut(BaseModel):
    k: List[float]
    quasi_energy_real: List[List[float]]
    quasi_energy_imag: List[List[float]]
    modulus: List[List[float]]


class PTPhaseOut(BaseModel):
    tag: str
    max_modulus_split: float
    real_part: Optional[float]
    k_at_max_split: Optional[float]


class SweepRequest(BaseModel):
    alpha_start: float = -1.0
    alpha_stop: float = 1.0
    alpha_count: int = Field(default=settings.alpha_count, ge=1)
    beta: List[float] = Field(default_factory=lambda: [0.25], min_length=1)
    t: List[Annotated[int, Field(ge=1, le=settings.api_max_steps)]] = Field(
        default_factory=lambda: [settings.default_steps], min_length=1
    )
    l1: float = Field(default=1.0, ge=0.0, le=1.0)
    l2: float = Field(default=1.0, ge=0.0, le=1.0)
    num_k: int = Field(default=settings.default_num_k, ge=2)
    coin: Coin = Coin.UP
    normalization: Normalization = Normalization.POSTSELECT
    pt_only: bool = False


class SweepRowOut(BaseModel):
    alpha: float
    beta: float
    t: Optional[int]
    l1: float
    l2: float
    D: Optional[float]
    S: Optional[float]
    surviving_norm: Optional[float]
    W: Optional[int]
    gap_zero: Optional[float]
    gap_pi: Optional[float]
    pt_phase: Optional[str]
