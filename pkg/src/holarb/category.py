"""Free categories on finite directed multigraphs: paths, loops and loop search."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import (
    DanglingEndpointError,
    DuplicateArrowError,
    NotComposableError,
    UnknownArrowError,
    UnknownObjectError,
)


class Arrow(NamedTuple):
    id: str
    src: str
    dst: str


@dataclass(frozen=True)
class TimeCategory:
    objects: tuple[str, ...]
    arrows: tuple[Arrow, ...]

    def arrow(self, arrow_id: str) -> Arrow:
        for a in self.arrows:
            if a.id == arrow_id:
                return a
        raise UnknownArrowError(f"no arrow {arrow_id!r}")

    def outgoing(self, obj: str) -> list[Arrow]:
        return sorted((a for a in self.arrows if a.src == obj), key=lambda a: a.id)

    def composable_pairs(self) -> list[tuple[str, str]]:
        """All (i, j) with i: s->t and j: t->u."""
        return [(i.id, j.id) for i in self.arrows for j in self.arrows if i.dst == j.src]


def build_category(objects: Sequence[str], arrows) -> TimeCategory:
    """``arrows`` is an iterable of ``(arrow_id, src, dst)`` triples."""
    objs = tuple(str(o) for o in objects)
    if len(set(objs)) != len(objs):
        raise ValueError("object identifiers must be unique")
    seen = set()
    built = []
    for a in arrows:
        a = Arrow(*(str(x) for x in a))
        if a.id in seen:
            raise DuplicateArrowError(f"arrow {a.id!r} declared twice")
        seen.add(a.id)
        for end in (a.src, a.dst):
            if end not in objs:
                raise DanglingEndpointError(f"arrow {a.id!r} references unknown object {end!r}")
        built.append(a)
    return TimeCategory(objs, tuple(built))


@dataclass(frozen=True)
class Path:
    arrows: tuple[str, ...]
    source: str
    target: str

    def __len__(self):
        return len(self.arrows)

    def objects(self, category: TimeCategory) -> list[str]:
        """The visited objects t_0, ..., t_n."""
        return [self.source] + [category.arrow(i).dst for i in self.arrows]


@dataclass(frozen=True)
class Loop(Path):
    @property
    def base(self) -> str:
        return self.source

    def __post_init__(self):
        if not self.arrows:
            raise ValueError("a loop needs at least one arrow")
        if self.source != self.target:
            raise NotComposableError(f"path ends at {self.target!r}, not at its base {self.source!r}")


def compose_path(category: TimeCategory, arrow_ids: Sequence[str]) -> Path:
    ids = tuple(arrow_ids)
    if not ids:
        raise ValueError("a path needs at least one arrow")
    arrows = [category.arrow(i) for i in ids]
    for k in range(1, len(arrows)):
        prev, cur = arrows[k - 1], arrows[k]
        if prev.dst != cur.src:
            raise NotComposableError(
                f"{prev.id!r} ends at {prev.dst!r} but {cur.id!r} starts at {cur.src!r}",
                position=k,
            )
    return Path(ids, arrows[0].src, arrows[-1].dst)


def as_loop(category: TimeCategory, arrow_ids: Sequence[str]) -> Loop:
    p = compose_path(category, arrow_ids)
    return Loop(p.arrows, p.source, p.target)


def enumerate_based_loops(
    category: TimeCategory,
    base: str,
    max_len: int,
    allow_repeat_arrows: bool = False,
    max_loops: int | None = None,
) -> list[Loop]:
    """All loops at ``base`` with at most ``max_len`` arrows, in lexicographic order.

    Rotations of one cycle are different loops because they have different
    base points.  ``max_loops`` stops the search once that many are found.
    """
    if base not in category.objects:
        raise UnknownObjectError(f"no object {base!r}")
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    found: list[tuple[str, ...]] = []
    stack: list[str] = []

    def dfs(obj):
        for a in category.outgoing(obj):
            if max_loops is not None and len(found) >= max_loops:
                return
            if not allow_repeat_arrows and a.id in stack:
                continue
            stack.append(a.id)
            if a.dst == base:
                found.append(tuple(stack))
            if len(stack) < max_len:
                dfs(a.dst)
            stack.pop()

    dfs(base)
    return [Loop(ids, base, base) for ids in sorted(found)]


class ReverseLeg(NamedTuple):
    """Marks an arrow traversed against its direction (the opposite trade)."""

    arrow_id: str

    def __str__(self):
        return f"{self.arrow_id}^r"


def reverse_path(path: Path) -> list[ReverseLeg]:
    return [ReverseLeg(i) for i in reversed(path.arrows)]
