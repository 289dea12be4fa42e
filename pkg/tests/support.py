"""Shared helpers for the test-suite: grids, test functions and sampled data."""

from __future__ import annotations

import math

import numpy as np

from localspline.data import HermiteData


def jittered_grid(N: int, rng, a: float = 0.0, b: float = 1.0, jitter: float = 0.3) -> np.ndarray:
    """Uniform grid on ``[a, b]`` with interior points moved by up to ``jitter`` spacings."""
    h = (b - a) / N
    y = a + h * np.arange(N + 1)
    y[1:-1] += rng.uniform(-jitter, jitter, N - 1) * h
    y[-1] = b
    return y


def monomial(deg: int):
    """``x**deg`` and its derivatives as a callable ``f(x, n)``."""

    def f(x, n=0):
        x = np.asarray(x, dtype=float)
        if n > deg:
            return np.zeros_like(x)
        return math.perm(deg, n) * x ** (deg - n)

    return f


def sine(x, n=0):
    return np.sin(np.asarray(x, dtype=float) + n * np.pi / 2)


def expo(x, n=0):
    return np.exp(np.asarray(x, dtype=float))


def exact_data(y, m: int, f) -> HermiteData:
    y = np.asarray(y, dtype=float)
    return HermiteData(
        f(y, 0),
        [float(f(y[0], l)) for l in range(1, m)],
        [float(f(y[-1], l)) for l in range(1, m)],
    )


def dd_data(y, m: int, f) -> HermiteData:
    y = np.asarray(y, dtype=float)
    return HermiteData.from_samples(y, f(y, 0), m)


def random_span(m: int, rng) -> np.ndarray:
    """``m + 1`` non-decreasing knots on [0, 1], sometimes with repeats, never degenerate."""
    while True:
        base = np.sort(rng.uniform(0.0, 1.0, m + 1))
        if rng.random() < 0.5:
            k = int(rng.integers(0, m))
            base[k + 1] = base[k]
        if base[-1] - base[0] > 0.05 and np.max(np.unique(base, return_counts=True)[1]) <= m:
            return base


def oracle_cases(m: int, rng, count: int = 200):
    """``(span, x)`` pairs with ``x`` inside the span's support."""
    out = []
    for _ in range(count):
        span = random_span(m, rng)
        x = rng.uniform(span[0], span[-1])
        out.append((span, float(x)))
    return out


def write_corpus(path, y, f) -> str:
    """``y,f`` CSV with round-trip float text."""
    lines = ["y,f"] + [f"{float(a)!r},{float(b)!r}" for a, b in zip(y, f)]
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def random_corpus(count: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    y = np.cumsum(rng.uniform(0.5, 1.5, count))
    return y, np.sin(y) + 0.1 * rng.normal(size=count)
