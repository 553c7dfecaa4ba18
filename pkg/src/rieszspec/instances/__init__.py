"""Concrete ordered vector spaces used throughout the package."""
from .herm import CommutingAlgebra, HermElement, HermSpace
from .pl import PLElement, PLSpace
from .qn import QnElement, QnSpace

__all__ = [
    "CommutingAlgebra",
    "HermElement",
    "HermSpace",
    "PLElement",
    "PLSpace",
    "QnElement",
    "QnSpace",
]
