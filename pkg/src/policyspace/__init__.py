"""Toolchain and runtime for policy-space interview models."""

from .model import ModelManifest, PolicyModel
from .space import Location, PolicySpace, SlotDefinition, SubspacePredicate

__all__ = [
    "Location",
    "ModelManifest",
    "PolicyModel",
    "PolicySpace",
    "SlotDefinition",
    "SubspacePredicate",
]

__version__ = "0.1.0"
