"""Seed splitting.

Every random draw in the package comes from ``stream(seed, task)``, so a run
is reproducible from its top-level seed regardless of how tasks are
scheduled.
"""
import numpy as np


def stream(seed: int, task: int = 0) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(task)]))
