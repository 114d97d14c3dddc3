"""UTF-8 JSON schemas shared across the toolkit.

Matrices: {"dim": n, "re": [[...]], "im": [[...]]}
States:   {"n": n, "q": [...], "p": [...]}
"""

from __future__ import annotations

import json

import numpy as np

from .geometry import RealPoint


def matrix_to_dict(m) -> dict:
    m = np.asarray(m, dtype=complex)
    return {"dim": int(m.shape[0]), "re": m.real.tolist(), "im": m.imag.tolist()}


def matrix_from_dict(d: dict) -> np.ndarray:
    dim = int(d["dim"])
    re = np.asarray(d["re"], dtype=float)
    im = np.asarray(d.get("im", np.zeros((dim, dim))), dtype=float)
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise ValueError(f"matrix payload shape does not match dim={dim}")
    return re + 1j * im


def state_to_dict(psi: RealPoint) -> dict:
    return {"n": psi.n, "q": psi.q.tolist(), "p": psi.p.tolist()}


def state_from_dict(d: dict) -> RealPoint:
    n = int(d["n"])
    q = np.asarray(d["q"], dtype=float)
    p = np.asarray(d["p"], dtype=float)
    if q.size != n or p.size != n:
        raise ValueError(f"state payload length does not match n={n}")
    return RealPoint(np.concatenate([q, p]))


def save_matrix(path, m) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_dict(m), fh)


def load_matrix(path) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        return matrix_from_dict(json.load(fh))


def save_state(path, psi: RealPoint) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_dict(psi), fh)


def load_state(path) -> RealPoint:
    with open(path, "r", encoding="utf-8") as fh:
        return state_from_dict(json.load(fh))
