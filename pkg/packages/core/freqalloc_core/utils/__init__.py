"""Utility functions for freqalloc-core"""

from .seeding import child_rng, child_seed, seed_sequence

__all__ = [
    "child_rng",
    "child_seed",
    "seed_sequence",
]
