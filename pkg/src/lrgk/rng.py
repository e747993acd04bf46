"""Deterministic seed derivation for independent random streams."""

import numpy as np


def derived_seed(seed, *key):
    """64-bit seed for the stream identified by (seed, *key).

    Streams derived with distinct keys are statistically independent, so
    results do not depend on evaluation order or worker count.
    """
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    a, b = ss.generate_state(2)
    return (int(a) << 32) | int(b)
