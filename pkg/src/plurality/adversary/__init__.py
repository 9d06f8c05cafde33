"""Adversary strategies and the registry used by the engine and CLI."""

from __future__ import annotations

from ..core import GameConfig
from .audit import AuditMismatch, WeightReport, audit, variant_for
from .aux import AuxGraph, Edge
from .base import CONDITIONED, POST_VIOLATION, Adversary
from .baseline import FixedColoringAdversary, RandomConsistentAdversary
from .generalk import GeneralKAdversary
from .k3 import Even3Adversary, Odd3Adversary

ADVERSARIES = ("paper", "even3", "odd3", "generalk", "fixed", "random")


def make_adversary(name: str, config: GameConfig, seed: int = 0, coloring=None) -> Adversary:
    """Build an adversary by registry name.

    ``paper`` picks even3/odd3 for k=3 by the parity of n and generalk otherwise.
    """
    if name == "paper":
        if config.k == 3:
            name = "odd3" if config.n % 2 else "even3"
        else:
            name = "generalk"
    if name == "even3":
        return Even3Adversary(config)
    if name == "odd3":
        return Odd3Adversary(config)
    if name == "generalk":
        return GeneralKAdversary(config)
    if name == "fixed":
        return FixedColoringAdversary(config, coloring, seed=seed)
    if name == "random":
        return RandomConsistentAdversary(config, seed=seed)
    raise ValueError(f"unknown adversary {name!r}; expected one of {', '.join(ADVERSARIES)}")


__all__ = [
    "ADVERSARIES",
    "CONDITIONED",
    "POST_VIOLATION",
    "Adversary",
    "AuditMismatch",
    "AuxGraph",
    "Edge",
    "Even3Adversary",
    "FixedColoringAdversary",
    "GeneralKAdversary",
    "Odd3Adversary",
    "RandomConsistentAdversary",
    "WeightReport",
    "audit",
    "make_adversary",
    "variant_for",
]
