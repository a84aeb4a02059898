"""The market-spec file format, shipped fixtures and a random system generator.

A market spec is a JSON document::

    {
      "spaces":  [{"id": "X0", "points": ["0", "1"], "weights": ["1/2", "1/2"]}, ...],
      "objects": [{"id": "t0", "space": "X0"}, ...],
      "arrows":  [{"id": "i1", "from": "t0", "to": "t1",
                   "backward_map": [["*", "1"]]}, ...],
      "admissibility": {"executable": {"i1": true, ...},
                        "loops": {"gamma": {"self_financing": true,
                                            "reverse_executable": false}}},
      "loops": {"gamma": ["i1", "i2", "i3"]}
    }

``backward_map`` lists ``[point of the 'to' space, point of the 'from' space]``
pairs: an arrow ``s -> t`` carries a map ``F(t) -> F(s)``.  Rationals are
written as ``"p/q"`` strings or integers; floats are rejected.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Mapping

from .category import build_category
from .errors import ParseError, SizeBoundError, ValidationError
from .filtration import Filtration, validate_filtration
from .measure import BackwardMap, FinProbSpace, as_rational, format_rational, make_space
from .strategy import AdmissibilityDeclaration

FIXTURES = ("simple", "stronger")


@dataclass(frozen=True)
class ArrowSpec:
    id: str
    src: str
    dst: str
    # (point of F(dst), point of F(src)) pairs
    backward_map: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class LoopDeclaration:
    self_financing: bool = False
    reverse_executable: bool = False


@dataclass(frozen=True)
class MarketSpec:
    spaces: tuple[FinProbSpace, ...]
    objects: tuple[tuple[str, str], ...]
    arrows: tuple[ArrowSpec, ...]
    executable: Mapping[str, bool] = field(default_factory=dict)
    loop_declarations: Mapping[str, LoopDeclaration] = field(default_factory=dict)
    loops: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def space(self, space_id: str) -> FinProbSpace:
        for s in self.spaces:
            if s.id == space_id:
                return s
        raise KeyError(space_id)

    def filtration(self) -> Filtration:
        cat = build_category([o for o, _ in self.objects], [(a.id, a.src, a.dst) for a in self.arrows])
        space_of = {o: self.space(s) for o, s in self.objects}
        map_of = {
            a.id: BackwardMap.from_labels(space_of[a.dst], space_of[a.src], a.backward_map)
            for a in self.arrows
        }
        return Filtration(cat, space_of, map_of)

    def resolve_loop(self, ref: str) -> tuple[str, ...]:
        """A named loop, or a comma-separated list of arrow ids."""
        if ref in self.loops:
            return tuple(self.loops[ref])
        return tuple(s.strip() for s in ref.split(",") if s.strip())

    def declaration(self, arrow_ids) -> AdmissibilityDeclaration | None:
        """The admissibility declaration for a loop, or None if nothing is declared."""
        arrow_ids = tuple(arrow_ids)
        decl = None
        for name, ids in self.loops.items():
            if tuple(ids) == arrow_ids and name in self.loop_declarations:
                decl = self.loop_declarations[name]
        key = ",".join(arrow_ids)
        if key in self.loop_declarations:
            decl = self.loop_declarations[key]
        if decl is None and not self.executable:
            return None
        decl = decl or LoopDeclaration()
        return AdmissibilityDeclaration(dict(self.executable), decl.self_financing, decl.reverse_executable)

    def to_dict(self) -> dict:
        out = {
            "spaces": [
                {"id": s.id, "points": list(s.points), "weights": [format_rational(w) for w in s.weights]}
                for s in self.spaces
            ],
            "objects": [{"id": o, "space": s} for o, s in self.objects],
            "arrows": [
                {"id": a.id, "from": a.src, "to": a.dst, "backward_map": [list(p) for p in a.backward_map]}
                for a in self.arrows
            ],
        }
        if self.executable or self.loop_declarations:
            out["admissibility"] = {
                "executable": dict(self.executable),
                "loops": {
                    k: {"self_financing": d.self_financing, "reverse_executable": d.reverse_executable}
                    for k, d in self.loop_declarations.items()
                },
            }
        if self.loops:
            out["loops"] = {k: list(v) for k, v in self.loops.items()}
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _need(obj, key, where, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError("missing required key", field=f"{where}.{key}" if where else key)
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise ParseError(f"expected {getattr(kind, '__name__', kind)}", field=f"{where}.{key}")
    return val


def _rational(value, where):
    if isinstance(value, float):
        raise ParseError(f"floating point value {value!r} is not allowed; write it as \"p/q\"", field=where)
    try:
        return as_rational(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(str(exc), field=where) from None


def _label(value, where):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise ParseError("point labels must be strings or integers", field=where)
    return str(value)


def spec_from_dict(doc) -> MarketSpec:
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    spaces = []
    for k, s in enumerate(_need(doc, "spaces", "", list)):
        where = f"spaces[{k}]"
        sid = str(_need(s, "id", where))
        points = [_label(p, f"{where}.points[{n}]") for n, p in enumerate(_need(s, "points", where, list))]
        weights = [_rational(w, f"{where}.weights[{n}]") for n, w in enumerate(_need(s, "weights", where, list))]
        if len(points) != len(weights):
            raise ParseError(f"{len(points)} points but {len(weights)} weights", field=where)
        spaces.append(make_space(sid, points, weights))
    space_ids = [s.id for s in spaces]
    if len(set(space_ids)) != len(space_ids):
        raise ParseError("space ids must be unique", field="spaces")
    by_id = dict(zip(space_ids, spaces))

    objects = []
    for k, o in enumerate(_need(doc, "objects", "", list)):
        where = f"objects[{k}]"
        oid, sid = str(_need(o, "id", where)), str(_need(o, "space", where))
        if sid not in by_id:
            raise ParseError(f"unknown space {sid!r}", field=f"{where}.space")
        objects.append((oid, sid))
    obj_space = dict(objects)

    arrows = []
    for k, a in enumerate(_need(doc, "arrows", "", list)):
        where = f"arrows[{k}]"
        aid = str(_need(a, "id", where))
        src, dst = str(_need(a, "from", where)), str(_need(a, "to", where))
        for key, o in (("from", src), ("to", dst)):
            if o not in obj_space:
                raise ParseError(f"unknown object {o!r}", field=f"{where}.{key}")
        pairs = []
        for n, p in enumerate(_need(a, "backward_map", where, list)):
            if not isinstance(p, list) or len(p) != 2:
                raise ParseError("expected a [to_point, from_point] pair", field=f"{where}.backward_map[{n}]")
            pairs.append((_label(p[0], f"{where}.backward_map[{n}][0]"), _label(p[1], f"{where}.backward_map[{n}][1]")))
        to_space, from_space = by_id[obj_space[dst]], by_id[obj_space[src]]
        seen = [x for x, _ in pairs]
        if sorted(seen) != sorted(to_space.points) or len(set(seen)) != len(seen):
            raise ParseError(
                f"backward_map must send each point of {to_space.id!r} exactly once", field=f"{where}.backward_map"
            )
        for n, (_, y) in enumerate(pairs):
            if y not in from_space.points:
                raise ParseError(f"{y!r} is not a point of {from_space.id!r}", field=f"{where}.backward_map[{n}][1]")
        arrows.append(ArrowSpec(aid, src, dst, tuple(pairs)))

    loops = {}
    for name, ids in (doc.get("loops") or {}).items():
        if not isinstance(ids, list):
            raise ParseError("a loop is a list of arrow ids", field=f"loops.{name}")
        loops[str(name)] = tuple(str(i) for i in ids)

    executable, decls = {}, {}
    adm = doc.get("admissibility") or {}
    if not isinstance(adm, dict):
        raise ParseError("expected an object", field="admissibility")
    for aid, flag in (adm.get("executable") or {}).items():
        if not isinstance(flag, bool):
            raise ParseError("expected true/false", field=f"admissibility.executable.{aid}")
        executable[str(aid)] = flag
    for name, d in (adm.get("loops") or {}).items():
        where = f"admissibility.loops.{name}"
        if not isinstance(d, dict):
            raise ParseError("expected an object", field=where)
        for key in ("self_financing", "reverse_executable"):
            if key in d and not isinstance(d[key], bool):
                raise ParseError("expected true/false", field=f"{where}.{key}")
        decls[str(name)] = LoopDeclaration(d.get("self_financing", False), d.get("reverse_executable", False))

    return MarketSpec(tuple(spaces), tuple(objects), tuple(arrows), executable, decls, loops)


def parse_market_spec(text: str, validate: bool = True) -> MarketSpec:
    """Parse a market spec from JSON text.

    With ``validate`` the filtration is built and checked; a failing check
    raises ValidationError carrying the report.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    spec = spec_from_dict(doc)
    if validate:
        try:
            filt = spec.filtration()
        except Exception as exc:
            raise ValidationError(str(exc)) from exc
        report = validate_filtration(filt)
        if not report.ok:
            raise ValidationError("filtration failed validation", report)
    return spec


def load_market_spec(path, validate: bool = True) -> MarketSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_market_spec(fh.read(), validate)


def fixture_text(name: str) -> str:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")
    return resources.files("holarb").joinpath("fixtures", f"{name}.market").read_text(encoding="utf-8")


def fixture(name: str) -> MarketSpec:
    return parse_market_spec(fixture_text(name))


# Generator size bounds
MAX_OBJECTS = 6
MAX_POINTS = 6
MAX_ARROWS = 10
WEIGHT_CAP = 6


def _random_weights(rng: random.Random, n: int, zero_ok=()) -> list[Fraction]:
    raw = [rng.randint(1, WEIGHT_CAP) for _ in range(n)]
    for k in zero_ok:
        if rng.random() < 0.5:
            raw[k] = 0
    if not any(raw):
        raw[rng.randrange(n)] = 1
    total = sum(raw)
    return [Fraction(r, total) for r in raw]


def _arrow_plan(rng, objects, arrows):
    n = len(objects)
    plan = [(objects[k], objects[(k + 1) % n]) for k in range(min(n, arrows))]
    while len(plan) < arrows:
        plan.append((rng.choice(objects), rng.choice(objects)))
    return plan


def generate_random_system(seed: int, objects: int = 3, max_points: int = 3, arrows: int | None = None,
                           measure_preserving: bool = False, null_points: bool = False) -> MarketSpec:
    """A random valid market spec, fully determined by its arguments.

    Objects ``t0..t{n-1}`` are joined by the cycle ``t0 -> t1 -> ... -> t0``
    (arrows ``i1..in``); extra arrows beyond ``objects`` join random pairs.
    Weights have denominators built from integers at most ``WEIGHT_CAP``.

    ``measure_preserving`` makes every backward map push its domain measure
    exactly onto its codomain measure.  ``null_points`` admits zero-weight
    points (only where no mass can land, so maps stay null-preserving).
    """
    arrows = objects if arrows is None else arrows
    if not 1 <= objects <= MAX_OBJECTS:
        raise SizeBoundError(f"objects must be in 1..{MAX_OBJECTS}")
    if not 1 <= max_points <= MAX_POINTS:
        raise SizeBoundError(f"max_points must be in 1..{MAX_POINTS}")
    if not 0 <= arrows <= MAX_ARROWS:
        raise SizeBoundError(f"arrows must be in 0..{MAX_ARROWS}")
    rng = random.Random(seed)
    objs = [f"t{k}" for k in range(objects)]
    plan = _arrow_plan(rng, objs, arrows)
    if measure_preserving:
        spaces, maps = _measure_preserving_system(rng, objs, plan, max_points, null_points)
    else:
        spaces, maps = _default_system(rng, objs, plan, max_points, null_points)
    arrow_specs = tuple(
        ArrowSpec(f"i{k + 1}", s, t, tuple(maps[k])) for k, (s, t) in enumerate(plan)
    )
    return MarketSpec(tuple(spaces), tuple((o, f"X{o[1:]}") for o in objs), arrow_specs)


def _default_system(rng, objs, plan, max_points, null_points):
    sizes = {o: rng.randint(1, max_points) for o in objs}
    labels = {o: [f"{o}.{p}" for p in range(sizes[o])] for o in objs}
    maps = []
    reached = {o: set() for o in objs}
    for s, t in plan:
        # F(t) -> F(s)
        img = [rng.randrange(sizes[s]) for _ in range(sizes[t])]
        reached[s].update(img)
        maps.append([(labels[t][x], labels[s][y]) for x, y in enumerate(img)])
    spaces = []
    for o in objs:
        zero_ok = [k for k in range(sizes[o]) if k not in reached[o]] if null_points else []
        spaces.append(make_space(f"X{o[1:]}", labels[o], _random_weights(rng, sizes[o], zero_ok)))
    return spaces, maps


def _measure_preserving_system(rng, objs, plan, max_points, null_points):
    # Every space is a relabelled copy of one weighted set (plus, with
    # null_points, at most one null point), and every map is a
    # weight-preserving bijection on the positive points; null points go
    # anywhere.
    room = max_points - 1 if null_points and max_points > 1 else max_points
    n_pos = rng.randint(1, room)
    levels = [rng.randint(1, 3) for _ in range(n_pos)]
    total = sum(levels)
    weights = [Fraction(v, total) for v in levels]
    spaces, labels, order = {}, {}, {}
    for o in objs:
        extra = 1 if null_points and max_points > n_pos and rng.random() < 0.5 else 0
        perm = list(range(n_pos))
        rng.shuffle(perm)
        # position -> positive class index, None for the null point
        slots = [perm[k] for k in range(n_pos)] + [None] * extra
        rng.shuffle(slots)
        order[o] = slots
        labels[o] = [f"{o}.{p}" for p in range(len(slots))]
        ws = [weights[c] if c is not None else Fraction(0) for c in slots]
        spaces[o] = make_space(f"X{o[1:]}", labels[o], ws)
    maps = []
    for s, t in plan:
        # a weight-preserving relabelling of the positive classes
        sigma = list(range(n_pos))
        for group in set(levels):
            idx = [c for c in range(n_pos) if levels[c] == group]
            shuffled = idx[:]
            rng.shuffle(shuffled)
            for a, b in zip(idx, shuffled):
                sigma[a] = b
        where_s = {c: k for k, c in enumerate(order[s]) if c is not None}
        pairs = []
        for x, c in enumerate(order[t]):
            y = where_s[sigma[c]] if c is not None else rng.randrange(len(order[s]))
            pairs.append((labels[t][x], labels[s][y]))
        maps.append(pairs)
    return [spaces[o] for o in objs], maps

