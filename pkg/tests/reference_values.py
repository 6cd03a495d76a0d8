"""Frozen expected values for the built-in Euclidean instance.

These are the exact closed-form matrices for the pair
K = span{(1,1,1)}, L = {x : x_1 = 0} in R^3 with the standard dot product.
"""

import math

import numpy as np

SQRT3 = math.sqrt(3.0)

EUCLID_P = np.full((3, 3), 1.0 / 3.0)

EUCLID_Q = np.diag([0.0, 1.0, 1.0])

EUCLID_P_MINUS_Q = (1.0 / 3.0) * np.array(
    [
        [1.0, 1.0, 1.0],
        [1.0, -2.0, 1.0],
        [1.0, 1.0, -2.0],
    ]
)

EUCLID_T2 = (1.0 / 3.0) * np.array(
    [
        [1.0, 0.0, 0.0],
        [0.0, 2.0, -1.0],
        [0.0, -1.0, 2.0],
    ]
)

EUCLID_T = (1.0 / (2.0 * SQRT3)) * np.array(
    [
        [2.0, 0.0, 0.0],
        [0.0, 1.0 + SQRT3, 1.0 - SQRT3],
        [0.0, 1.0 - SQRT3, 1.0 + SQRT3],
    ]
)

EUCLID_T_INV = 0.5 * np.array(
    [
        [2.0 * SQRT3, 0.0, 0.0],
        [0.0, 1.0 + SQRT3, -1.0 + SQRT3],
        [0.0, -1.0 + SQRT3, 1.0 + SQRT3],
    ]
)

EUCLID_J = (1.0 / 6.0) * np.array(
    [
        [2.0 * SQRT3, 2.0 * SQRT3, 2.0 * SQRT3],
        [2.0 * SQRT3, -3.0 - SQRT3, 3.0 - SQRT3],
        [2.0 * SQRT3, 3.0 - SQRT3, -3.0 - SQRT3],
    ]
)

EUCLID_P_PLUS_Q_MINUS_I = (1.0 / 3.0) * np.array(
    [
        [-2.0, 1.0, 1.0],
        [1.0, 1.0, 1.0],
        [1.0, 1.0, 1.0],
    ]
)

EUCLID_C2 = (1.0 / 3.0) * np.array(
    [
        [2.0, 0.0, 0.0],
        [0.0, 1.0, 1.0],
        [0.0, 1.0, 1.0],
    ]
)

EUCLID_C = (1.0 / math.sqrt(6.0)) * np.array(
    [
        [2.0, 0.0, 0.0],
        [0.0, 1.0, 1.0],
        [0.0, 1.0, 1.0],
    ]
)

EUCLID_K = (1.0 / math.sqrt(6.0)) * np.array(
    [
        [-2.0, 1.0, 1.0],
        [1.0, 1.0, 1.0],
        [1.0, 1.0, 1.0],
    ]
)

EUCLID_K2 = 0.5 * np.array(
    [
        [2.0, 0.0, 0.0],
        [0.0, 1.0, 1.0],
        [0.0, 1.0, 1.0],
    ]
)

EUCLID_JK = (1.0 / math.sqrt(2.0)) * np.array(
    [
        [0.0, 1.0, 1.0],
        [-1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
    ]
)

EUCLID_S = np.array(
    [
        [1.0, 0.0, 0.0],
        [2.0, -1.0, 0.0],
        [2.0, 0.0, -1.0],
    ]
)

EUCLID_DELTA = np.array(
    [
        [9.0, -2.0, -2.0],
        [-2.0, 1.0, 0.0],
        [-2.0, 0.0, 1.0],
    ]
)

EUCLID_T2_EIGENVALUES = np.array([1.0, 1.0 / 3.0, 1.0 / 3.0])

# fixed subspace of T: the line x_1 = x_2 + x_3 = 0
EUCLID_SYM_DIRECTION = np.array([0.0, 1.0, -1.0])


def larmor_gram(r: float) -> np.ndarray:
    """Gram matrix of the spin-precession model basis at parameter r."""
    w = 2.0 * (1.0 - r * r)
    return np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, w, -r * w],
            [0.0, 0.0, -r * w, w],
        ]
    )
