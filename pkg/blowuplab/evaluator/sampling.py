"""
Seeded sampling with one random substream per sample.

Every sample is drawn from ``default_rng(SeedSequence([seed, tag, n, index]))``,
so a sample depends only on its own coordinates in the suite and chunks can
be generated in any order, on any worker.
"""

import math

from typing import List, Tuple

import numpy as np

from blowuplab import settings
from blowuplab.core.nodes import is_separated
from blowuplab.core.weights import expanded_nodes
from blowuplab.utils.errors import DomainViolation, SamplingExhausted
from blowuplab.utils.typing import CauchyProblem, RepetitionSpec, XVector

_MASK64 = 0xFFFFFFFFFFFFFFFF
# lower end of the log-uniform range, relative to x_max
_LOG_UNIFORM_FLOOR = 1e-6

# mixed-sign points with known outcomes, always probed in extended mode
PROBE_POINTS: Tuple[Tuple[float, ...], ...] = (
    (2.0, -2.0),
    (0.0, -1.0),
    (1.0, -0.5),
    (-0.25, -0.5),
)


class StreamTag:
    POSITIVE = 1
    EQUALITY = 2
    EXTENDED = 3
    BLOWUP = 4
    REPETITION = 5


def substream(seed: int, tag: int, n: int, index: int) -> np.random.Generator:
    """Independent generator for one sample of one suite."""

    entropy = [int(seed) & _MASK64, int(tag), int(n), int(index)]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def _log_uniform(rng: np.random.Generator, lo: float, hi: float, size=None):
    return np.exp(rng.uniform(math.log(lo), math.log(hi), size=size))


def _draw_separated(rng: np.random.Generator, draw, what: str) -> np.ndarray:
    for _ in range(settings.MAX_REJECTIONS):
        x = draw(rng)
        if is_separated(x):
            return x
    raise SamplingExhausted(
        f"{settings.MAX_REJECTIONS} consecutive rejections while sampling {what}"
    )


def positive_sample(n: int, seed: int, x_max: float, index: int) -> XVector:
    if not x_max > 0:
        raise DomainViolation(f"x_max must be positive, got {x_max!r}")
    rng = substream(seed, StreamTag.POSITIVE, n, index)
    lo = _LOG_UNIFORM_FLOOR * x_max
    return _draw_separated(
        rng, lambda g: _log_uniform(g, lo, x_max, size=n), f"x in R^{n}"
    )


def sample_positive_distinct(
    n: int, count: int, seed: int, x_max: float, start: int = 0
) -> List[XVector]:
    """Draw ``count`` separated points log-uniform on ``[1e-6 x_max, x_max]^n``.

    Sample ``i`` only depends on ``(seed, n, start + i)``, so any split into
    chunks reproduces the serial sequence.

    :raises SamplingExhausted: After 1000 consecutive rejections.
    """

    if count < 1:
        raise DomainViolation(f"count must be at least 1, got {count!r}")
    return [
        positive_sample(n, seed, x_max, index) for index in range(start, start + count)
    ]


def equality_case(x: XVector, seed: int, index: int) -> XVector:
    """Copy of ``x`` with one coordinate, chosen by its own substream, set to 0."""

    rng = substream(seed, StreamTag.EQUALITY, x.size, index)
    out = x.copy()
    out[int(rng.integers(x.size))] = 0.0
    return out


def extended_sample(
    n: int, seed: int, index: int, radius: float = settings.EXTENDED_RADIUS
) -> XVector:
    """Point drawn uniformly on ``[-radius, radius]^n``, not necessarily separated."""

    rng = substream(seed, StreamTag.EXTENDED, n, index)
    return rng.uniform(-radius, radius, size=n)


def sample_cauchy_problem(
    n_range: Tuple[int, int], seed: int, index: int
) -> CauchyProblem:
    """Random blow-up problem: ``k`` log-uniform in [0.1, 10], ``y0`` below 0
    or above ``k_n`` with equal probability."""

    rng = substream(seed, StreamTag.BLOWUP, 0, index)
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    k = _draw_separated(
        rng, lambda g: np.sort(_log_uniform(g, 0.1, 10.0, size=n)), f"k in R^{n}"
    )
    if rng.random() < 0.5:
        y0 = -float(_log_uniform(rng, 0.1, 10.0))
    else:
        y0 = float(k[-1] * (1.0 + _log_uniform(rng, 1e-2, 10.0)))
    return CauchyProblem(tuple(k.tolist()), y0)


def sample_repetition_spec(
    n: int, seed: int, x_max: float, max_total_r: int, index: int
) -> RepetitionSpec:
    """Random positive ``x`` with multiplicities ``r_i >= 1``, ``sum r_i <= max_total_r``,
    redrawn until the expanded nodes are separated."""

    if n > max_total_r:
        raise DomainViolation(f"n={n} exceeds max_total_r={max_total_r}")
    rng = substream(seed, StreamTag.REPETITION, n, index)
    lo = _LOG_UNIFORM_FLOOR * x_max
    for _ in range(settings.MAX_REJECTIONS):
        x = _log_uniform(rng, lo, x_max, size=n)
        extra = int(rng.integers(0, max_total_r - n + 1))
        r = 1 + rng.multinomial(extra, [1.0 / n] * n)
        spec = RepetitionSpec(tuple(x.tolist()), tuple(int(v) for v in r))
        if is_separated(x) and is_separated(expanded_nodes(spec)):
            return spec
    raise SamplingExhausted(
        f"{settings.MAX_REJECTIONS} consecutive rejections while sampling repetitions"
    )
