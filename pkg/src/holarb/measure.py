"""Finite probability spaces and the conditional expectation operators between them.

Every space carries the full power set as its sigma-algebra, so a measure is
just a vector of point weights and a measurable map is just a function on
point indices.  All arithmetic is done with :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from .errors import (
    AbsoluteContinuityError,
    DuplicatePointError,
    NullPreservationError,
    SpaceMismatchError,
    WeightSumError,
)

ZERO = Fraction(0)
ONE = Fraction(1)


def as_rational(value) -> Fraction:
    """Coerce ``value`` to a Fraction, refusing anything inexact.

    Accepts ints, Fractions and strings like ``"3/4"`` or ``"2"``.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if any(c in text for c in ".eE") or not text:
            raise ValueError(f"not an exact rational: {value!r}")
        return Fraction(text)
    raise TypeError(f"not an exact rational: {value!r} ({type(value).__name__})")


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class FinProbSpace:
    id: str
    points: tuple[str, ...]
    weights: tuple[Fraction, ...]

    def __len__(self):
        return len(self.points)

    def index(self, label) -> int:
        try:
            return self.points.index(str(label))
        except ValueError:
            raise KeyError(f"point {label!r} not in space {self.id!r}") from None

    def weight(self, label) -> Fraction:
        return self.weights[self.index(label)]

    @property
    def support(self) -> tuple[int, ...]:
        """Indices of points with positive weight."""
        return tuple(k for k, w in enumerate(self.weights) if w > 0)

    def measure(self, subset: Iterable[int]) -> Fraction:
        return sum((self.weights[k] for k in subset), ZERO)


def make_space(id: str, points: Sequence, weights: Sequence) -> FinProbSpace:
    points = tuple(str(p) for p in points)
    if not points:
        raise ValueError(f"space {id!r} has no points")
    if len(points) != len(weights):
        raise ValueError(f"space {id!r}: {len(points)} points but {len(weights)} weights")
    if len(set(points)) != len(points):
        dup = next(p for p in points if points.count(p) > 1)
        raise DuplicatePointError(f"space {id!r}: point {dup!r} repeated")
    ws = tuple(as_rational(w) for w in weights)
    if any(w < 0 for w in ws):
        raise ValueError(f"space {id!r}: negative weight")
    total = sum(ws, ZERO)
    if total != 1:
        raise WeightSumError(f"space {id!r}: weights sum to {format_rational(total)}, not 1")
    return FinProbSpace(str(id), points, ws)


@dataclass(frozen=True)
class RandomVariable:
    """An element of L^1 of a finite space: one rational per point."""

    space_id: str
    values: tuple[Fraction, ...]

    @classmethod
    def of(cls, space: FinProbSpace, values: Sequence) -> "RandomVariable":
        vals = tuple(as_rational(v) for v in values)
        if len(vals) != len(space):
            raise SpaceMismatchError(
                f"{len(vals)} values for space {space.id!r} with {len(space)} points"
            )
        return cls(space.id, vals)

    @classmethod
    def constant(cls, space: FinProbSpace, c=1) -> "RandomVariable":
        return cls(space.id, (as_rational(c),) * len(space))

    @classmethod
    def indicator(cls, space: FinProbSpace, subset: Iterable[int]) -> "RandomVariable":
        s = set(subset)
        return cls(space.id, tuple(ONE if k in s else ZERO for k in range(len(space))))

    def __len__(self):
        return len(self.values)

    def __getitem__(self, k):
        return self.values[k]

    def _check_same(self, other: "RandomVariable"):
        if other.space_id != self.space_id or len(other) != len(self):
            raise SpaceMismatchError(
                f"random variables live on {self.space_id!r} and {other.space_id!r}"
            )

    def __mul__(self, other):
        if isinstance(other, RandomVariable):
            self._check_same(other)
            return RandomVariable(self.space_id, tuple(a * b for a, b in zip(self.values, other.values)))
        c = as_rational(other)
        return RandomVariable(self.space_id, tuple(a * c for a in self.values))

    __rmul__ = __mul__

    def __add__(self, other: "RandomVariable"):
        self._check_same(other)
        return RandomVariable(self.space_id, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "RandomVariable"):
        self._check_same(other)
        return RandomVariable(self.space_id, tuple(a - b for a, b in zip(self.values, other.values)))

    def ae_equal(self, other: "RandomVariable", space: FinProbSpace, strict: bool = False) -> bool:
        """Equality almost everywhere on ``space``; ``strict`` compares every point."""
        self._check_same(other)
        if strict:
            return self.values == other.values
        return all(self.values[k] == other.values[k] for k in space.support)

    def as_dict(self, space: FinProbSpace) -> dict[str, Fraction]:
        if space.id != self.space_id:
            raise SpaceMismatchError(f"{self.space_id!r} is not {space.id!r}")
        return dict(zip(space.points, self.values))


@dataclass(frozen=True)
class BackwardMap:
    """A measurable map between finite spaces, stored as codomain indices.

    ``mapping[k]`` is the codomain index of domain point ``k``.  Null
    preservation is not enforced here so that invalid maps can still be
    represented and reported; see :meth:`is_null_preserving`.
    """

    domain: FinProbSpace
    codomain: FinProbSpace
    mapping: tuple[int, ...]

    def __post_init__(self):
        if len(self.mapping) != len(self.domain):
            raise ValueError(
                f"map {self.domain.id!r}->{self.codomain.id!r} is not total: "
                f"{len(self.mapping)} images for {len(self.domain)} points"
            )
        for k, y in enumerate(self.mapping):
            if not 0 <= y < len(self.codomain):
                raise ValueError(
                    f"point {self.domain.points[k]!r} maps outside {self.codomain.id!r}"
                )

    @classmethod
    def from_labels(cls, domain: FinProbSpace, codomain: FinProbSpace, pairs) -> "BackwardMap":
        """Build from ``{domain_label: codomain_label}`` or an iterable of pairs."""
        pairs = dict(pairs.items() if hasattr(pairs, "items") else pairs)
        pairs = {str(k): str(v) for k, v in pairs.items()}
        missing = [p for p in domain.points if p not in pairs]
        if missing:
            raise ValueError(f"map into {codomain.id!r} leaves {missing} unmapped")
        extra = [p for p in pairs if p not in domain.points]
        if extra:
            raise ValueError(f"map from {domain.id!r} names unknown points {extra}")
        return cls(domain, codomain, tuple(codomain.index(pairs[p]) for p in domain.points))

    @classmethod
    def identity(cls, space: FinProbSpace) -> "BackwardMap":
        return cls(space, space, tuple(range(len(space))))

    @property
    def domain_space(self) -> str:
        return self.domain.id

    @property
    def codomain_space(self) -> str:
        return self.codomain.id

    def preimage(self, subset: Iterable[int]) -> list[int]:
        s = set(subset)
        return [k for k, y in enumerate(self.mapping) if y in s]

    def null_violations(self) -> list[int]:
        """Codomain null points whose preimage carries positive mass."""
        mass = pushforward(self, self.domain)
        return [y for y, w in enumerate(self.codomain.weights) if w == 0 and mass[y] > 0]

    def is_null_preserving(self) -> bool:
        return not self.null_violations()

    def then(self, other: "BackwardMap") -> "BackwardMap":
        """The composite ``other . self`` (apply self first)."""
        if other.domain.id != self.codomain.id:
            raise SpaceMismatchError(
                f"cannot compose {self.domain.id}->{self.codomain.id} "
                f"with {other.domain.id}->{other.codomain.id}"
            )
        return BackwardMap(self.domain, other.codomain, tuple(other.mapping[y] for y in self.mapping))


def _require_null_preserving(phi: BackwardMap):
    bad = phi.null_violations()
    if bad:
        names = [phi.codomain.points[y] for y in bad]
        raise NullPreservationError(
            f"map {phi.domain.id!r}->{phi.codomain.id!r} puts mass on null points {names}"
        )


def pushforward(phi: BackwardMap, source: FinProbSpace) -> tuple[Fraction, ...]:
    """The measure ``mu . phi^{-1}`` on the codomain of ``phi``."""
    if source.id != phi.domain.id:
        raise SpaceMismatchError(f"map is defined on {phi.domain.id!r}, not {source.id!r}")
    out = [ZERO] * len(phi.codomain)
    for k, y in enumerate(phi.mapping):
        out[y] += source.weights[k]
    return tuple(out)


def radon_nikodym(numerator: Sequence, base: FinProbSpace) -> RandomVariable:
    """Density of a measure on ``base``'s points with respect to ``base``.

    Null points of ``base`` get the representative 0.
    """
    num = [as_rational(v) for v in numerator]
    if len(num) != len(base):
        raise SpaceMismatchError(f"measure has {len(num)} entries, space {base.id!r} has {len(base)}")
    vals = []
    for y, (n, w) in enumerate(zip(num, base.weights)):
        if w > 0:
            vals.append(n / w)
        elif n == 0:
            vals.append(ZERO)
        else:
            raise AbsoluteContinuityError(
                f"measure charges null point {base.points[y]!r} of {base.id!r}"
            )
    return RandomVariable(base.id, tuple(vals))


def cond_exp(phi: BackwardMap, f: RandomVariable) -> RandomVariable:
    """Conditional expectation of ``f`` along ``phi``, as a variable on the codomain."""
    if f.space_id != phi.domain.id or len(f) != len(phi.domain):
        raise SpaceMismatchError(f"variable on {f.space_id!r}, map defined on {phi.domain.id!r}")
    _require_null_preserving(phi)
    mu, nu = phi.domain.weights, phi.codomain.weights
    acc = [ZERO] * len(phi.codomain)
    for k, y in enumerate(phi.mapping):
        acc[y] += f.values[k] * mu[k]
    return RandomVariable(
        phi.codomain.id, tuple(a / nu[y] if nu[y] > 0 else ZERO for y, a in enumerate(acc))
    )


@dataclass(frozen=True)
class CondExpOperator:
    """Matrix of a conditional expectation: rows are target points, columns source points."""

    source_space: str
    target_space: str
    matrix: tuple[tuple[Fraction, ...], ...]

    @property
    def shape(self):
        return len(self.matrix), len(self.matrix[0]) if self.matrix else 0

    def apply(self, f: RandomVariable) -> RandomVariable:
        if f.space_id != self.source_space:
            raise SpaceMismatchError(f"operator acts on {self.source_space!r}, not {f.space_id!r}")
        return RandomVariable(
            self.target_space,
            tuple(sum((a * v for a, v in zip(row, f.values)), ZERO) for row in self.matrix),
        )

    def __matmul__(self, other: "CondExpOperator") -> "CondExpOperator":
        """``self @ other`` applies ``other`` first."""
        if other.target_space != self.source_space:
            raise SpaceMismatchError(
                f"cannot chain {other.source_space}->{other.target_space} "
                f"into {self.source_space}->{self.target_space}"
            )
        inner = len(other.matrix)
        cols = len(other.matrix[0])
        rows = tuple(
            tuple(sum((row[m] * other.matrix[m][c] for m in range(inner)), ZERO) for c in range(cols))
            for row in self.matrix
        )
        return CondExpOperator(other.source_space, self.target_space, rows)


def cond_exp_operator(phi: BackwardMap) -> CondExpOperator:
    _require_null_preserving(phi)
    mu, nu = phi.domain.weights, phi.codomain.weights
    rows = []
    for y, w in enumerate(nu):
        if w == 0:
            rows.append((ZERO,) * len(mu))
        else:
            rows.append(tuple(mu[k] / w if phi.mapping[k] == y else ZERO for k in range(len(mu))))
    return CondExpOperator(phi.domain.id, phi.codomain.id, tuple(rows))


def integrate(space: FinProbSpace, f: RandomVariable, subset: Iterable[int] | None = None) -> Fraction:
    """Integral of ``f`` over ``subset`` (default: the whole space)."""
    if f.space_id != space.id or len(f) != len(space):
        raise SpaceMismatchError(f"variable on {f.space_id!r} integrated over {space.id!r}")
    idx = range(len(space)) if subset is None else subset
    return sum((f.values[k] * space.weights[k] for k in idx), ZERO)


def probability(space: FinProbSpace, predicate) -> Fraction:
    """Mass of the points whose index satisfies ``predicate``."""
    return space.measure(k for k in range(len(space)) if predicate(k))
