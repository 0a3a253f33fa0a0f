"""Reproducible sampling of points in W_R.

All randomness goes through numpy's PCG64 bit generator, whose stream for a
given seed is fixed across platforms and numpy releases.
"""

from __future__ import annotations

from typing import List

import numpy as np

from .dynamics import Point

__all__ = ["rng", "sample_region"]

SPAN = 1e3


def rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def sample_region(R: float, count: int, seed: int, span: float = SPAN) -> List[Point]:
    """``count`` points of W_R with R < Re <= R + span and |Im| <= span.

    Real-part offsets are log-uniform on [1e-9 * span, span] so that
    samples crowd the boundary Re = R, where f is largest.
    """
    gen = rng(seed)
    lo, hi = np.log10(span) - 9.0, np.log10(span)
    re = R + 10.0 ** gen.uniform(lo, hi, size=(count, 2))
    im = gen.uniform(-span, span, size=(count, 2))
    return [
        Point(complex(re[i, 0], im[i, 0]), complex(re[i, 1], im[i, 1]))
        for i in range(count)
    ]
