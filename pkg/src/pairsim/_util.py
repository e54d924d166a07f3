"""Small numerical helpers shared across modules."""
from __future__ import annotations

import math

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0   # 1/phi
_INVPHI2 = (3.0 - math.sqrt(5.0)) / 2.0  # 1/phi^2


def golden_section_min(fn, a: float, b: float, xtol: float) -> tuple[float, float]:
    """Minimize a unimodal scalar function on [a, b] by golden-section search.

    Returns (x_min, fn(x_min)). Terminates when the bracket is shorter
    than ``xtol``; the best evaluated point is returned.
    """
    if b < a:
        a, b = b, a
    h = b - a
    if h <= xtol:
        x = 0.5 * (a + b)
        return x, fn(x)
    c = a + _INVPHI2 * h
    d = a + _INVPHI * h
    fc, fd = fn(c), fn(d)
    n = int(math.ceil(math.log(xtol / h) / math.log(_INVPHI)))
    for _ in range(max(n, 1)):
        if fc < fd:
            b, d, fd = d, c, fc
            h *= _INVPHI
            c = a + _INVPHI2 * h
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            h *= _INVPHI
            d = a + _INVPHI * h
            fd = fn(d)
        if h <= xtol:
            break
    return (c, fc) if fc < fd else (d, fd)
