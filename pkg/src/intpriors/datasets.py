"""Embedded case-study datasets."""

import numpy as np

from .types import Dataset

# Exponential mean test: n = 15 positive observations, mean 0.7.
EXAMPLE1_SAMPLE = np.array(
    [1.094, 0.105, 1.315, 0.655, 0.860, 1.630, 0.275, 0.634,
     0.377, 0.667, 1.327, 0.002, 0.535, 0.230, 0.795]
)

# Normal mean-sign test: n = 15 paired differences, mean -0.927, sd 2.530.
NORMAL_SIGN_SAMPLE = np.array(
    [-6.08601161, -0.38629099, -0.94318682, -1.10768258, 1.62898983,
     -4.53073160, -0.65574138, -0.58995846, 3.85144493, -3.94493171,
     1.32760319, -0.84059533, -2.38323565, -0.08982564, 0.84510522]
)

# Occurrences of the word "may" per block in the Madison papers:
# value -> number of blocks.
MADISON_COUNTS = {0: 156, 1: 63, 2: 29, 3: 8, 4: 4, 5: 1, 6: 1}


def madison_observations() -> np.ndarray:
    return np.concatenate(
        [np.full(freq, value) for value, freq in MADISON_COUNTS.items()]
    )


def example1_dataset() -> Dataset:
    return Dataset.from_observations(EXAMPLE1_SAMPLE)


def normal_sign_dataset() -> Dataset:
    return Dataset.from_observations(NORMAL_SIGN_SAMPLE)


def madison_dataset() -> Dataset:
    return Dataset.from_observations(madison_observations())
