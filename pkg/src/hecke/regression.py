"""Regression constants, recomputed by the unpruned integer-mode enumerator.

Values were produced by ``hecke.oracles`` (full transversals, Smith-form cells)
and frozen here; the ``oracles`` verification suite recomputes both routes.
"""

CONSTANTS = [
    {"kind": "structure", "group": "PGL2", "p": 5, "lam": [-1, 0], "mu": [-1, 0], "nu": [-2, 0], "value": 1},
    {"kind": "structure", "group": "PGL2", "p": 5, "lam": [-1, 0], "mu": [-1, 0], "nu": [0, 0], "value": 6},
    {"kind": "structure", "group": "PGL2", "p": 5, "lam": [-1, 0], "mu": [-2, 0], "nu": [-3, 0], "value": 1},
    {"kind": "structure", "group": "PGL2", "p": 5, "lam": [-1, 0], "mu": [-2, 0], "nu": [-1, 0], "value": 5},
    {"kind": "structure", "group": "PGL2", "p": 5, "lam": [-2, 0], "mu": [-2, 0], "nu": [-4, 0], "value": 1},
    {"kind": "structure", "group": "PGL2", "p": 5, "lam": [-2, 0], "mu": [-2, 0], "nu": [-2, 0], "value": 4},
    {"kind": "structure", "group": "PGL2", "p": 5, "lam": [-2, 0], "mu": [-2, 0], "nu": [0, 0], "value": 30},
    {"kind": "structure", "group": "GL2", "p": 5, "lam": [-1, 0], "mu": [-1, 0], "nu": [-2, 0], "value": 1},
    {"kind": "structure", "group": "GL2", "p": 5, "lam": [-1, 0], "mu": [-1, 0], "nu": [-1, -1], "value": 6},
    {"kind": "structure", "group": "GL2", "p": 5, "lam": [-1, 0], "mu": [0, 1], "nu": [-1, 1], "value": 1},
    {"kind": "structure", "group": "GL2", "p": 5, "lam": [-1, 0], "mu": [0, 1], "nu": [0, 0], "value": 6},
    {"kind": "structure", "group": "SL2", "p": 5, "lam": [-1], "mu": [-1], "nu": [-2], "value": 1},
    {"kind": "structure", "group": "SL2", "p": 5, "lam": [-1], "mu": [-1], "nu": [-1], "value": 4},
    {"kind": "structure", "group": "SL2", "p": 5, "lam": [-1], "mu": [-1], "nu": [0], "value": 30},
    {"kind": "satake0", "group": "PGL2", "p": 5, "lam": [-1, 0], "value": [[[-1, 0], 1], [[1, 0], 5]]},
    {"kind": "satake0", "group": "PGL2", "p": 5, "lam": [-2, 0], "value": [[[-2, 0], 1], [[0, 0], 4], [[2, 0], 25]]},
    {"kind": "satake0", "group": "PGL2", "p": 5, "lam": [-3, 0], "value": [[[-3, 0], 1], [[-1, 0], 4], [[1, 0], 20], [[3, 0], 125]]},
    {"kind": "satake0", "group": "GL2", "p": 5, "lam": [-1, 0], "value": [[[-1, 0], 1], [[0, -1], 5]]},
    {"kind": "satake0", "group": "GL2", "p": 5, "lam": [-2, 0], "value": [[[-2, 0], 1], [[-1, -1], 4], [[0, -2], 25]]},
    {"kind": "satake0", "group": "SL2", "p": 5, "lam": [-1], "value": [[[-1], 1], [[0], 4], [[1], 25]]},
    {"kind": "satake0", "group": "GL3", "p": 5, "lam": [-1, 0, 0], "value": [[[-1, 0, 0], 1], [[0, -1, 0], 5], [[0, 0, -1], 25]]},
    {"kind": "satake0", "group": "GL3", "p": 5, "lam": [-1, -1, 0], "value": [[[-1, -1, 0], 1], [[-1, 0, -1], 5], [[0, -1, -1], 25]]},
    {"kind": "structure", "group": "PGL2", "p": 7, "lam": [-1, 0], "mu": [-1, 0], "nu": [-2, 0], "value": 1},
    {"kind": "structure", "group": "PGL2", "p": 7, "lam": [-1, 0], "mu": [-1, 0], "nu": [0, 0], "value": 8},
    {"kind": "structure", "group": "PGL2", "p": 7, "lam": [-1, 0], "mu": [-2, 0], "nu": [-3, 0], "value": 1},
    {"kind": "structure", "group": "PGL2", "p": 7, "lam": [-1, 0], "mu": [-2, 0], "nu": [-1, 0], "value": 7},
    {"kind": "structure", "group": "PGL2", "p": 7, "lam": [-2, 0], "mu": [-2, 0], "nu": [-4, 0], "value": 1},
    {"kind": "structure", "group": "PGL2", "p": 7, "lam": [-2, 0], "mu": [-2, 0], "nu": [-2, 0], "value": 6},
    {"kind": "structure", "group": "PGL2", "p": 7, "lam": [-2, 0], "mu": [-2, 0], "nu": [0, 0], "value": 56},
    {"kind": "structure", "group": "GL2", "p": 7, "lam": [-1, 0], "mu": [-1, 0], "nu": [-2, 0], "value": 1},
    {"kind": "structure", "group": "GL2", "p": 7, "lam": [-1, 0], "mu": [-1, 0], "nu": [-1, -1], "value": 8},
    {"kind": "structure", "group": "GL2", "p": 7, "lam": [-1, 0], "mu": [0, 1], "nu": [-1, 1], "value": 1},
    {"kind": "structure", "group": "GL2", "p": 7, "lam": [-1, 0], "mu": [0, 1], "nu": [0, 0], "value": 8},
    {"kind": "structure", "group": "SL2", "p": 7, "lam": [-1], "mu": [-1], "nu": [-2], "value": 1},
    {"kind": "structure", "group": "SL2", "p": 7, "lam": [-1], "mu": [-1], "nu": [-1], "value": 6},
    {"kind": "structure", "group": "SL2", "p": 7, "lam": [-1], "mu": [-1], "nu": [0], "value": 56},
    {"kind": "satake0", "group": "PGL2", "p": 7, "lam": [-1, 0], "value": [[[-1, 0], 1], [[1, 0], 7]]},
    {"kind": "satake0", "group": "PGL2", "p": 7, "lam": [-2, 0], "value": [[[-2, 0], 1], [[0, 0], 6], [[2, 0], 49]]},
    {"kind": "satake0", "group": "PGL2", "p": 7, "lam": [-3, 0], "value": [[[-3, 0], 1], [[-1, 0], 6], [[1, 0], 42], [[3, 0], 343]]},
    {"kind": "satake0", "group": "GL2", "p": 7, "lam": [-1, 0], "value": [[[-1, 0], 1], [[0, -1], 7]]},
    {"kind": "satake0", "group": "GL2", "p": 7, "lam": [-2, 0], "value": [[[-2, 0], 1], [[-1, -1], 6], [[0, -2], 49]]},
    {"kind": "satake0", "group": "SL2", "p": 7, "lam": [-1], "value": [[[-1], 1], [[0], 6], [[1], 49]]},
    {"kind": "satake0", "group": "GL3", "p": 7, "lam": [-1, 0, 0], "value": [[[-1, 0, 0], 1], [[0, -1, 0], 7], [[0, 0, -1], 49]]},
    {"kind": "satake0", "group": "GL3", "p": 7, "lam": [-1, -1, 0], "value": [[[-1, -1, 0], 1], [[-1, 0, -1], 7], [[0, -1, -1], 49]]},
]
