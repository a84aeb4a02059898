"""Filtrations as contravariant functors into finite probability spaces.

An arrow ``i: s -> t`` of the time category carries a backward map
``F(i): F(t) -> F(s)``.  Its conditional expectation moves variables from
``F(t)`` back to ``F(s)``, and the distortion ``dF(i)`` is what that operator
does to the constant 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .category import Path, TimeCategory, compose_path
from .errors import (
    AbsoluteContinuityError,
    NullPreservationError,
    SpaceMismatchError,
    UnknownArrowError,
    UnknownObjectError,
)
from .measure import (
    BackwardMap,
    FinProbSpace,
    RandomVariable,
    cond_exp,
    cond_exp_operator,
    integrate,
    pushforward,
    radon_nikodym,
)


@dataclass(frozen=True)
class Filtration:
    category: TimeCategory
    space_of: Mapping[str, FinProbSpace]
    map_of: Mapping[str, BackwardMap]
    _memo: dict = field(default_factory=dict, compare=False, repr=False)

    def space(self, obj: str) -> FinProbSpace:
        try:
            return self.space_of[obj]
        except KeyError:
            raise UnknownObjectError(f"no space assigned to object {obj!r}") from None

    def map(self, arrow_id: str) -> BackwardMap:
        if arrow_id not in self.map_of:
            raise UnknownArrowError(f"no map for arrow {arrow_id!r}")
        return self.map_of[arrow_id]

    def transport(self, arrow_id: str, f: RandomVariable) -> RandomVariable:
        """Apply ``(E . F)(i)``: a variable on F(t) becomes one on F(s)."""
        return cond_exp(self.map(arrow_id), f)

    def distortion(self, arrow_id: str) -> RandomVariable:
        return distortion(self, arrow_id)


@dataclass(frozen=True)
class ArrowCheck:
    arrow_id: str
    shape_ok: bool
    null_preserving: bool
    message: str = ""

    @property
    def ok(self):
        return self.shape_ok and self.null_preserving


@dataclass(frozen=True)
class FiltrationReport:
    arrows: tuple[ArrowCheck, ...]
    problems: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.problems and all(a.ok for a in self.arrows)


def validate_filtration(filt: Filtration) -> FiltrationReport:
    problems = []
    for obj in filt.category.objects:
        if obj not in filt.space_of:
            problems.append(f"object {obj!r} has no space")
    checks = []
    for a in filt.category.arrows:
        phi = filt.map_of.get(a.id)
        if phi is None:
            checks.append(ArrowCheck(a.id, False, False, "no backward map"))
            continue
        src, dst = filt.space_of.get(a.src), filt.space_of.get(a.dst)
        msgs = []
        shape_ok = (
            src is not None
            and dst is not None
            and phi.domain == dst
            and phi.codomain == src
        )
        if not shape_ok:
            msgs.append(
                f"map goes {phi.domain.id}->{phi.codomain.id}, expected "
                f"{getattr(dst, 'id', '?')}->{getattr(src, 'id', '?')}"
            )
        bad = phi.null_violations()
        if bad:
            msgs.append("charges null points " + ", ".join(phi.codomain.points[y] for y in bad))
        checks.append(ArrowCheck(a.id, shape_ok, not bad, "; ".join(msgs)))
    return FiltrationReport(tuple(checks), tuple(problems))


def distortion_by_operator(filt: Filtration, arrow_id: str) -> RandomVariable:
    phi = filt.map(arrow_id)
    return cond_exp_operator(phi).apply(RandomVariable.constant(phi.domain))


def distortion_by_density(filt: Filtration, arrow_id: str) -> RandomVariable:
    phi = filt.map(arrow_id)
    try:
        return radon_nikodym(pushforward(phi, phi.domain), phi.codomain)
    except AbsoluteContinuityError as exc:
        raise NullPreservationError(str(exc)) from exc


def distortion(filt: Filtration, arrow_id: str) -> RandomVariable:
    """dF(i) on F(s) for ``i: s -> t``; the operator and density routes must agree."""
    key = ("dF", arrow_id)
    if key in filt._memo:
        return filt._memo[key]
    by_op = distortion_by_operator(filt, arrow_id)
    by_rn = distortion_by_density(filt, arrow_id)
    if by_op != by_rn:
        raise ArithmeticError(f"distortion routes disagree on {arrow_id!r}: {by_op} vs {by_rn}")
    return filt._memo.setdefault(key, by_op)


def composite_map(filt: Filtration, path: Path) -> BackwardMap:
    """F of the composite arrow: F(t_n) -> F(t_0), applying F(i_n) first."""
    phi = filt.map(path.arrows[-1])
    for i in reversed(path.arrows[:-1]):
        phi = phi.then(filt.map(i))
    return phi


def distortion_of_path(filt: Filtration, path: Path) -> RandomVariable:
    """dF of the composite by folding the cocycle rule from the last arrow back."""
    d = distortion(filt, path.arrows[-1])
    for i in reversed(path.arrows[:-1]):
        d = filt.transport(i, d)
    return d


def distortion_of_composite(filt: Filtration, path: Path) -> RandomVariable:
    """dF of the composite straight from the composed backward map."""
    phi = composite_map(filt, path)
    return cond_exp_operator(phi).apply(RandomVariable.constant(phi.domain))


@dataclass(frozen=True)
class CocycleReport:
    i: str
    j: str
    composite: RandomVariable
    transported: RandomVariable
    residual: RandomVariable

    @property
    def ok(self) -> bool:
        return all(r == 0 for r in self.residual.values)


def check_cocycle(filt: Filtration, i: str, j: str) -> CocycleReport:
    """Compare dF(j . i) from the composed map against (E . F)(i)(dF(j))."""
    path = compose_path(filt.category, [i, j])
    composite = distortion_of_composite(filt, path)
    transported = filt.transport(i, distortion(filt, j))
    return CocycleReport(i, j, composite, transported, composite - transported)


@dataclass(frozen=True)
class MartingaleCheck:
    arrow_id: str
    transported: RandomVariable
    expected: RandomVariable
    ok: bool


@dataclass(frozen=True)
class MartingaleReport:
    checks: tuple[MartingaleCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)


def check_family(filt: Filtration, family: Mapping[str, RandomVariable]):
    for obj in filt.category.objects:
        if obj not in family:
            raise UnknownObjectError(f"family has no member at {obj!r}")
        space = filt.space(obj)
        f = family[obj]
        if f.space_id != space.id or len(f) != len(space):
            raise SpaceMismatchError(f"family member at {obj!r} lives on {f.space_id!r}, not {space.id!r}")


def is_F_martingale(filt: Filtration, family: Mapping[str, RandomVariable]) -> MartingaleReport:
    """Check ``(E . F)(i)(f_t) == f_s * dF(i)`` a.e. on F(s) for every ``i: s -> t``."""
    check_family(filt, family)
    checks = []
    for a in filt.category.arrows:
        lhs = filt.transport(a.id, family[a.dst])
        rhs = family[a.src] * distortion(filt, a.id)
        checks.append(MartingaleCheck(a.id, lhs, rhs, lhs.ae_equal(rhs, filt.space(a.src))))
    return MartingaleReport(tuple(checks))


def is_classical_martingale(filt: Filtration, family: Mapping[str, RandomVariable]) -> MartingaleReport:
    """The undistorted condition ``(E . F)(i)(f_t) == f_s``."""
    check_family(filt, family)
    checks = []
    for a in filt.category.arrows:
        lhs = filt.transport(a.id, family[a.dst])
        rhs = family[a.src]
        checks.append(MartingaleCheck(a.id, lhs, rhs, lhs.ae_equal(rhs, filt.space(a.src))))
    return MartingaleReport(tuple(checks))


def is_measure_preserving(filt: Filtration, arrow_id: str) -> bool:
    phi = filt.map(arrow_id)
    return pushforward(phi, phi.domain) == phi.codomain.weights


def unit_integral(filt: Filtration, arrow_id: str) -> Fraction:
    phi = filt.map(arrow_id)
    return integrate(phi.codomain, distortion(filt, arrow_id))
