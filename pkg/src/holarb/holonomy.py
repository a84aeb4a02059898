"""Holonomy of loops and their arbitrage classification."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .category import Loop, Path, compose_path, enumerate_based_loops
from .errors import NotComposableError
from .filtration import Filtration, distortion
from .measure import ONE, ZERO, RandomVariable, as_rational, probability


class Classification(str, enum.Enum):
    TRIVIAL = "trivial"
    WEAK_ONLY = "weak_only"
    STRONG = "strong"

    @property
    def rank(self) -> int:
        return list(Classification).index(self)


@dataclass(frozen=True)
class HolonomyTrace:
    """``h[k]`` is h_{k+1} (0-based), living on F(t_k); ``pulled[k]`` is (E . F)(i_{k+1})(h_{k+2})."""

    path: Path
    h: tuple[RandomVariable, ...]
    pulled: tuple[RandomVariable | None, ...]

    @property
    def hol(self) -> RandomVariable:
        return self.h[0]


def path_trace(filt: Filtration, path: Path) -> HolonomyTrace:
    """Run the backward recursion h_n = dF(i_n), h_k = dF(i_k) * (E . F)(i_k)(h_{k+1})."""
    n = len(path.arrows)
    h: list[RandomVariable] = [None] * n
    pulled: list[RandomVariable | None] = [None] * n
    h[n - 1] = distortion(filt, path.arrows[n - 1])
    for k in range(n - 2, -1, -1):
        i = path.arrows[k]
        pulled[k] = filt.transport(i, h[k + 1])
        h[k] = distortion(filt, i) * pulled[k]
    return HolonomyTrace(path, tuple(h), tuple(pulled))


def checked_loop(filt: Filtration, loop) -> Loop:
    ids = loop.arrows if isinstance(loop, Path) else tuple(loop)
    p = compose_path(filt.category, ids)
    if p.source != p.target:
        raise NotComposableError(f"path {list(ids)} does not return to {p.source!r}")
    return Loop(p.arrows, p.source, p.target)


def holonomy_trace(filt: Filtration, loop) -> HolonomyTrace:
    return path_trace(filt, checked_loop(filt, loop))


def holonomy(filt: Filtration, loop) -> RandomVariable:
    """Hol(loop) as a variable on the base space. ``loop`` may be a Loop or arrow ids."""
    return holonomy_trace(filt, loop).hol


@dataclass(frozen=True)
class HolonomyReport:
    loop: Loop
    hol: RandomVariable
    p_neq_1: Fraction
    p_gt_1: Fraction
    p_ge_1: Fraction
    p_dev_eps: Fraction
    epsilon: Fraction
    classification: Classification
    trace: HolonomyTrace | None = None


def classify(p_neq_1: Fraction, p_gt_1: Fraction) -> Classification:
    if p_gt_1 > 0:
        return Classification.STRONG
    if p_neq_1 > 0:
        return Classification.WEAK_ONLY
    return Classification.TRIVIAL


def classify_loop(filt: Filtration, loop, epsilon=0) -> HolonomyReport:
    eps = as_rational(epsilon)
    if eps < 0:
        raise ValueError("epsilon must be nonnegative")
    trace = holonomy_trace(filt, loop)
    loop = checked_loop(filt, loop)
    hol = trace.hol
    base = filt.space(loop.base)
    v = hol.values
    p_neq = probability(base, lambda k: v[k] != ONE)
    p_gt = probability(base, lambda k: v[k] > ONE)
    p_ge = probability(base, lambda k: v[k] >= ONE)
    p_dev = probability(base, lambda k: abs(v[k] - ONE) > eps)
    return HolonomyReport(loop, hol, p_neq, p_gt, p_ge, p_dev, eps, classify(p_neq, p_gt), trace)


@dataclass(frozen=True)
class ScanResult:
    base: str
    max_len: int
    reports: tuple[HolonomyReport, ...]
    truncated: bool = False

    @property
    def verdict(self) -> Classification:
        return max((r.classification for r in self.reports), key=lambda c: c.rank,
                   default=Classification.TRIVIAL)

    def __iter__(self):
        return iter(self.reports)

    def __len__(self):
        return len(self.reports)


def scan(filt: Filtration, base: str, max_len: int, epsilon=0, *,
         allow_repeat_arrows: bool = False, max_loops: int | None = None) -> ScanResult:
    """Classify every loop at ``base`` up to ``max_len`` arrows.

    The verdict only covers the loops searched; TRIVIAL means no effect was
    found within the bound.
    """
    loops = enumerate_based_loops(filt.category, base, max_len, allow_repeat_arrows, max_loops)
    reports = tuple(classify_loop(filt, lp, epsilon) for lp in loops)
    truncated = max_loops is not None and len(loops) >= max_loops
    return ScanResult(base, max_len, reports, truncated)


@dataclass(frozen=True)
class ReverseGain:
    values: RandomVariable
    # points where Hol = 0, so the reverse loop has no finite gain
    flagged: tuple[int, ...]

    @property
    def exact_reciprocal(self) -> tuple[Fraction | None, ...]:
        return tuple(None if k in self.flagged else v for k, v in enumerate(self.values.values))


def reverse_gain(hol: RandomVariable) -> ReverseGain:
    vals, flagged = [], []
    for k, v in enumerate(hol.values):
        if v > 0:
            vals.append(1 / v)
        else:
            vals.append(ZERO)
            flagged.append(k)
    return ReverseGain(RandomVariable(hol.space_id, tuple(vals)), tuple(flagged))
