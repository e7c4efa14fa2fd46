"""Deterministic layout of random substreams.

Every stochastic step draws from a generator spawned off the single run
seed with a fixed spawn key, so reruns with the same seed reproduce
byte-identical outputs and distinct steps (calibration, per-iteration
sampling, each fold factor) never share a stream.
"""

from __future__ import annotations

import numpy as np

STREAM_CALIBRATION = 0
STREAM_ITERATION = 1


def substream(seed: int, *key: int) -> np.random.Generator:
    """Generator for the substream ``key`` of the run ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(key)))


def calibration_stream(seed: int) -> np.random.Generator:
    return substream(seed, STREAM_CALIBRATION)


def iteration_stream(seed: int, iteration: int, fold_factor: int) -> np.random.Generator:
    """Sampling stream for one QSCI iteration; fold 0 marks the noiseless path."""
    return substream(seed, STREAM_ITERATION, iteration, fold_factor)
