"""Prior family tags and the local-scale reparameterization."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum


class PriorFamily(Enum):
    HS = "hs"
    HS_PLUS = "hs+"
    HTHS = "hths"
    HTHS_PLUS = "hths+"
    HTHS_LAMBDA = "hths_lambda"

    @classmethod
    def parse(cls, text: str) -> "PriorFamily":
        key = text.strip().lower().replace("-", "_").replace("_plus", "+").replace("plus", "+")
        aliases = {
            "hs": cls.HS,
            "hs+": cls.HS_PLUS,
            "hths": cls.HTHS,
            "hths+": cls.HTHS_PLUS,
            "hths_lambda": cls.HTHS_LAMBDA,
            "hths_l": cls.HTHS_LAMBDA,
            "hthsl": cls.HTHS_LAMBDA,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown prior family {text!r}") from None

    @property
    def label(self) -> str:
        return {
            PriorFamily.HS: "HS",
            PriorFamily.HS_PLUS: "HS+",
            PriorFamily.HTHS: "HTHS",
            PriorFamily.HTHS_PLUS: "HTHS+",
            PriorFamily.HTHS_LAMBDA: "HTHS_lambda",
        }[self]


# Families whose gamma/tau marginals have closed forms.
CLOSED_FORM_FAMILIES = (
    PriorFamily.HS,
    PriorFamily.HS_PLUS,
    PriorFamily.HTHS,
    PriorFamily.HTHS_PLUS,
)

ALL_FAMILIES = tuple(PriorFamily)


@dataclass(frozen=True)
class LocalScale:
    """A local adaptive scale gamma with its shrinkage profile tau = gamma/(1+gamma)."""

    gamma: float
    tau: float

    @classmethod
    def from_gamma(cls, gamma: float) -> "LocalScale":
        if not gamma > 0.0:
            raise ValueError(f"gamma must be positive, got {gamma}")
        return cls(gamma=gamma, tau=gamma / (1.0 + gamma))

    @classmethod
    def from_tau(cls, tau: float) -> "LocalScale":
        if not 0.0 < tau < 1.0:
            raise ValueError(f"tau must lie in (0, 1), got {tau}")
        return cls(gamma=tau / (1.0 - tau), tau=tau)

    @property
    def log_gamma(self) -> float:
        return math.log(self.gamma)
