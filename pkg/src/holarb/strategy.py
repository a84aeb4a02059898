"""Predictable loop strategies, their wealth, and admissibility of loops."""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Mapping

from .category import Loop
from .errors import HolarbError, IncompleteDeclarationError
from .filtration import Filtration
from .holonomy import checked_loop, holonomy_trace, reverse_gain
from .measure import ONE, ZERO, FinProbSpace, RandomVariable, as_rational, integrate, probability


@dataclass(frozen=True)
class Position:
    space_id: str
    values: RandomVariable

    def __post_init__(self):
        if any(v not in (-1, 0, 1) for v in self.values.values):
            raise ValueError("positions take values in {-1, 0, 1}")


def ab_position(hol: RandomVariable) -> Position:
    """Hold the loop exactly where Hol > 1."""
    return Position(hol.space_id, RandomVariable(
        hol.space_id, tuple(ONE if v > 1 else ZERO for v in hol.values)))


def wab_position(hol: RandomVariable, epsilon=0) -> Position:
    eps = as_rational(epsilon)
    if eps < 0:
        raise ValueError("epsilon must be nonnegative")
    vals = []
    for v in hol.values:
        if v > 1 + eps:
            vals.append(ONE)
        elif v < 1 - eps:
            vals.append(-ONE)
        else:
            vals.append(ZERO)
    return Position(hol.space_id, RandomVariable(hol.space_id, tuple(vals)))


@dataclass(frozen=True)
class StrategyReport:
    mode: str
    position: Position
    wealth: RandomVariable
    expected_wealth: Fraction
    p_strict_gain: Fraction
    min_wealth: Fraction
    # points where the short leg would need 1/Hol with Hol = 0
    flagged: tuple[int, ...] = ()
    admissible: bool | None = None
    admissible_ab_arbitrage: bool | None = None

    @property
    def idealized(self) -> bool:
        """True when some wealth comes from the reciprocal reverse leg."""
        return any(v == -1 for v in self.position.values.values)


def _summary(space: FinProbSpace, wealth: RandomVariable, skip=()):
    live = [k for k in space.support if k not in skip]
    e = integrate(space, wealth)
    p = probability(space, lambda k: k not in skip and wealth.values[k] > 1)
    low = min((wealth.values[k] for k in live), default=ONE)
    return e, p, low


def ab_wealth(hol: RandomVariable, space: FinProbSpace) -> StrategyReport:
    """V = 1 + theta (Hol - 1) for theta the indicator of {Hol > 1}."""
    theta = ab_position(hol)
    v = RandomVariable(hol.space_id, tuple(
        1 + t * (h - 1) for t, h in zip(theta.values.values, hol.values)))
    e, p, low = _summary(space, v)
    return StrategyReport("ab", theta, v, e, p, low)


def wab_wealth(hol: RandomVariable, space: FinProbSpace, epsilon=0) -> StrategyReport:
    """Long the loop above 1 + eps, reverse it below 1 - eps (idealized reciprocal).

    Points where Hol = 0 and a reverse leg is called for are flagged and left
    out of ``min_wealth`` and ``p_strict_gain``; their wealth is recorded as 0.
    """
    theta = wab_position(hol, epsilon)
    rev = reverse_gain(hol)
    vals, flagged = [], []
    for k, (t, h) in enumerate(zip(theta.values.values, hol.values)):
        if t == 1:
            vals.append(h)
        elif t == -1:
            vals.append(rev.values.values[k])
            if k in rev.flagged:
                flagged.append(k)
        else:
            vals.append(ONE)
    v = RandomVariable(hol.space_id, tuple(vals))
    e, p, low = _summary(space, v, skip=set(flagged))
    return StrategyReport("wab", theta, v, e, p, low, tuple(flagged))


@dataclass(frozen=True)
class AdmissibilityDeclaration:
    executable: Mapping[str, bool]
    self_financing: bool = False
    reverse_executable: bool = False


@dataclass(frozen=True)
class AdmissibilityVerdict:
    loop: Loop
    # observability holds by construction: Hol lives on the base space
    observable: bool
    executable: bool
    composable: bool
    self_financing: bool
    reverse_executable: bool
    non_executable: tuple[str, ...] = ()

    @property
    def admissible(self) -> bool:
        return self.observable and self.executable and self.composable and self.self_financing

    def allows(self, position: Position) -> bool:
        """Whether ``position`` can be run on this loop."""
        if not self.admissible:
            return False
        needs_reverse = any(v == -1 for v in position.values.values)
        return self.reverse_executable or not needs_reverse


def check_admissibility(loop: Loop, declaration: AdmissibilityDeclaration,
                        filt: Filtration | None = None) -> AdmissibilityVerdict:
    missing = [i for i in loop.arrows if i not in declaration.executable]
    if missing:
        raise IncompleteDeclarationError(f"no executability declared for arrows {missing}")
    composable = True
    if filt is not None:
        try:
            checked_loop(filt, loop)
        except HolarbError:
            composable = False
    blocked = tuple(i for i in loop.arrows if not declaration.executable[i])
    return AdmissibilityVerdict(
        loop=loop,
        observable=True,
        executable=not blocked,
        composable=composable,
        self_financing=bool(declaration.self_financing),
        reverse_executable=bool(declaration.reverse_executable),
        non_executable=blocked,
    )


def with_admissibility(report: StrategyReport, verdict: AdmissibilityVerdict,
                       p_gt_1: Fraction) -> StrategyReport:
    ok = verdict.allows(report.position)
    return replace(report, admissible=ok, admissible_ab_arbitrage=verdict.admissible and p_gt_1 > 0)


def self_financing_wealth_trace(filt: Filtration, loop) -> list[RandomVariable]:
    """Wealth V_0 = 1, ..., V_n = Hol(loop), all valued on the base space.

    V_k is the h-trace entry h_{n-k+1} (the last k legs, accumulated) carried
    back to the base through the conditional expectations of the first n-k
    arrows.  The leg factor V_k / V_{k-1} is taken as 0 where V_{k-1} = 0;
    positivity of the transports makes V_k vanish there as well.
    """
    trace = holonomy_trace(filt, loop)
    arrows = trace.path.arrows
    n = len(arrows)
    base = filt.space(trace.path.source)
    carried = []
    for k in range(1, n + 1):
        x = trace.h[n - k]
        for i in reversed(arrows[: n - k]):
            x = filt.transport(i, x)
        carried.append(x)
    wealth = [RandomVariable.constant(base)]
    for x in carried:
        prev = wealth[-1]
        factor = RandomVariable(base.id, tuple(
            xv / pv if pv != 0 else ZERO for xv, pv in zip(x.values, prev.values)))
        wealth.append(prev * factor)
    return wealth


def leg_factors(wealth: list[RandomVariable]) -> list[RandomVariable]:
    out = []
    for prev, cur in zip(wealth, wealth[1:]):
        out.append(RandomVariable(cur.space_id, tuple(
            c / p if p != 0 else ZERO for c, p in zip(cur.values, prev.values))))
    return out
