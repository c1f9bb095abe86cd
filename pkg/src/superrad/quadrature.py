"""Suffix (tail) integrals on a uniform grid."""
import numpy as np


def suffix_integral(f: np.ndarray, spacing: float) -> np.ndarray:
    """Trapezoid approximation of ``int_{xi_j}^{xi_max} f`` for every grid point ``j``.

    Works along the last axis.  The value at the last grid point is exactly 0.
    """
    panels = 0.5 * spacing * (f[..., 1:] + f[..., :-1])
    out = np.zeros_like(f)
    out[..., :-1] = np.cumsum(panels[..., ::-1], axis=-1)[..., ::-1]
    return out
