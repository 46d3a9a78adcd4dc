"""Quivers with relations: the in-memory presentation and its textual format.

A presentation is a finite quiver (points and named arrows) together with
zero relations ``p = 0`` and commutativity relations ``p = q`` between
parallel paths.

Path convention
---------------
Paths are written in *function-composition order*: the leftmost arrow is
applied LAST.  The path ``m l`` denotes the morphism ``m ∘ l`` (first ``l``,
then ``m``), so consecutive arrows must satisfy
``source(arrows[i]) == target(arrows[i+1])``.  The source of a path is the
source of its rightmost arrow and the target is the target of its leftmost
arrow.  Reversed conventions are common elsewhere; everything in this
package uses this one.

Input format (line oriented)::

    category NAME
    points P1 P2 ...
    arrow NAME : P -> Q
    rel PATH = PATH
    rel PATH = 0
    # comment

Arrow and point names are ASCII identifiers.  A JSON interchange form
mirrors the presentation field for field (see ``presentation_to_json``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Union

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class PresentationError(ValueError):
    """Invalid presentation data (bad names, dangling endpoints, bad relations)."""


class ParseError(PresentationError):
    """Syntax or validation error in the textual format, with position info."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + where)


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    """Finite quiver: ordered points and ordered named arrows."""

    points: tuple[str, ...]
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        seen = set()
        for p in self.points:
            if not _NAME_RE.match(p):
                raise PresentationError(f"bad point name {p!r}")
            if p in seen:
                raise PresentationError(f"duplicate point {p!r}")
            seen.add(p)
        names = set()
        pts = set(self.points)
        for a in self.arrows:
            if not _NAME_RE.match(a.name):
                raise PresentationError(f"bad arrow name {a.name!r}")
            if a.name in names:
                raise PresentationError(f"duplicate arrow {a.name!r}")
            names.add(a.name)
            if a.source not in pts:
                raise PresentationError(f"arrow {a.name}: unknown source {a.source!r}")
            if a.target not in pts:
                raise PresentationError(f"arrow {a.name}: unknown target {a.target!r}")

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise PresentationError(f"unknown arrow {name!r}")

    @property
    def arrow_names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.arrows)

    def arrows_from(self, point: str) -> tuple[Arrow, ...]:
        return tuple(a for a in self.arrows if a.source == point)

    def arrows_into(self, point: str) -> tuple[Arrow, ...]:
        return tuple(a for a in self.arrows if a.target == point)


# A path is a nonempty tuple of arrow names, leftmost applied last.
Path = tuple[str, ...]


def path_source(quiver: Quiver, path: Path) -> str:
    return quiver.arrow(path[-1]).source


def path_target(quiver: Quiver, path: Path) -> str:
    return quiver.arrow(path[0]).target


def validate_path(quiver: Quiver, path: Iterable[str]) -> Path:
    """Check composability of a nonempty arrow sequence; return it as a tuple."""
    path = tuple(path)
    if not path:
        raise PresentationError("empty path")
    arrows = []
    for name in path:
        arrows.append(quiver.arrow(name))
    for i in range(len(arrows) - 1):
        if arrows[i].source != arrows[i + 1].target:
            raise PresentationError(
                f"non-composable path {' '.join(path)}: "
                f"{arrows[i].name} expects source {arrows[i].source!r} "
                f"but {arrows[i + 1].name} ends at {arrows[i + 1].target!r}"
            )
    return path


@dataclass(frozen=True)
class ZeroRelation:
    path: Path


@dataclass(frozen=True)
class CommutativityRelation:
    lhs: Path
    rhs: Path


Relation = Union[ZeroRelation, CommutativityRelation]


def _validate_relation(quiver: Quiver, rel: Relation) -> None:
    if isinstance(rel, ZeroRelation):
        validate_path(quiver, rel.path)
        return
    lhs = validate_path(quiver, rel.lhs)
    rhs = validate_path(quiver, rel.rhs)
    if path_source(quiver, lhs) != path_source(quiver, rhs) or path_target(
        quiver, lhs
    ) != path_target(quiver, rhs):
        raise PresentationError(
            f"non-parallel relation {' '.join(lhs)} = {' '.join(rhs)}"
        )
    # No relation may identify an arrow with an identity: either both sides
    # are genuine composites, or the first and last arrows differ on the two
    # sides.
    if len(lhs) < 2 or len(rhs) < 2:
        if lhs[0] == rhs[0] or lhs[-1] == rhs[-1]:
            raise PresentationError(
                f"relation {' '.join(lhs)} = {' '.join(rhs)} would identify "
                "an arrow with an identity"
            )


def _dedupe(relations: Iterable[Relation]) -> tuple[Relation, ...]:
    out = []
    seen = set()
    for rel in relations:
        if isinstance(rel, ZeroRelation):
            key = ("zero", rel.path)
        else:
            key = ("comm",) + tuple(sorted([rel.lhs, rel.rhs]))
        if key not in seen:
            seen.add(key)
            out.append(rel)
    return tuple(out)


@dataclass(frozen=True)
class Presentation:
    """A named quiver with relations; the unit of input for every command."""

    name: str
    quiver: Quiver
    relations: tuple[Relation, ...]

    def __post_init__(self):
        if not _NAME_RE.match(self.name):
            raise PresentationError(f"bad category name {self.name!r}")
        for rel in self.relations:
            _validate_relation(self.quiver, rel)
        object.__setattr__(self, "relations", _dedupe(self.relations))

    @property
    def points(self) -> tuple[str, ...]:
        return self.quiver.points


def make_presentation(name, points, arrows, relations) -> Presentation:
    """Convenience constructor from plain data.

    ``arrows`` is an iterable of (name, source, target); ``relations`` an
    iterable of either (path, None) for zero relations or (lhs, rhs).
    """
    quiver = Quiver(tuple(points), tuple(Arrow(*a) for a in arrows))
    rels = []
    for lhs, rhs in relations:
        if rhs is None:
            rels.append(ZeroRelation(tuple(lhs)))
        else:
            rels.append(CommutativityRelation(tuple(lhs), tuple(rhs)))
    return Presentation(name, quiver, tuple(rels))


# ---------------------------------------------------------------------------
# textual format


def parse_presentation(text: str) -> Presentation:
    """Parse the line-oriented format; raise ParseError with line/column info."""
    name = None
    points: list[str] = []
    arrows: list[Arrow] = []
    raw_rels: list[tuple[int, tuple[str, ...], tuple[str, ...] | None]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0]
        if head == "category":
            if len(tokens) != 2:
                raise ParseError("expected: category NAME", lineno)
            if name is not None:
                raise ParseError("duplicate category line", lineno)
            name = tokens[1]
        elif head == "points":
            points.extend(tokens[1:])
        elif head == "arrow":
            m = re.match(
                r"^arrow\s+(\S+)\s*:\s*(\S+)\s*->\s*(\S+)$", line
            )
            if not m:
                raise ParseError("expected: arrow NAME : P -> Q", lineno)
            arrows.append(Arrow(m.group(1), m.group(2), m.group(3)))
        elif head == "rel":
            body = line[len("rel"):].strip()
            if "=" not in body:
                raise ParseError("expected: rel PATH = PATH or rel PATH = 0", lineno)
            lhs_text, rhs_text = body.split("=", 1)
            lhs = tuple(lhs_text.split())
            rhs_text = rhs_text.strip()
            if not lhs:
                raise ParseError("empty left-hand side in relation", lineno)
            if rhs_text == "0":
                raw_rels.append((lineno, lhs, None))
            else:
                rhs = tuple(rhs_text.split())
                if not rhs:
                    raise ParseError("empty right-hand side in relation", lineno)
                raw_rels.append((lineno, lhs, rhs))
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, raw.find(head) + 1)

    try:
        quiver = Quiver(tuple(points), tuple(arrows))
    except PresentationError as exc:
        raise ParseError(str(exc)) from exc

    rels: list[Relation] = []
    for lineno, lhs, rhs in raw_rels:
        try:
            if rhs is None:
                rel: Relation = ZeroRelation(validate_path(quiver, lhs))
            else:
                rel = CommutativityRelation(
                    validate_path(quiver, lhs), validate_path(quiver, rhs)
                )
            _validate_relation(quiver, rel)
        except PresentationError as exc:
            raise ParseError(str(exc), lineno) from exc
        rels.append(rel)

    try:
        return Presentation(name or "presentation", quiver, tuple(rels))
    except PresentationError as exc:
        raise ParseError(str(exc)) from exc


def print_presentation(p: Presentation) -> str:
    """Canonical text: declaration order preserved, one declaration per line."""
    lines = [f"category {p.name}"]
    if p.quiver.points:
        lines.append("points " + " ".join(p.quiver.points))
    for a in p.quiver.arrows:
        lines.append(f"arrow {a.name} : {a.source} -> {a.target}")
    for rel in p.relations:
        if isinstance(rel, ZeroRelation):
            lines.append("rel " + " ".join(rel.path) + " = 0")
        else:
            lines.append("rel " + " ".join(rel.lhs) + " = " + " ".join(rel.rhs))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# JSON interchange (field-for-field mirror of Presentation)


def presentation_to_json(p: Presentation) -> dict:
    rels = []
    for rel in p.relations:
        if isinstance(rel, ZeroRelation):
            rels.append({"kind": "zero", "path": list(rel.path)})
        else:
            rels.append({"kind": "commute", "lhs": list(rel.lhs), "rhs": list(rel.rhs)})
    return {
        "name": p.name,
        "points": list(p.quiver.points),
        "arrows": [
            {"name": a.name, "source": a.source, "target": a.target}
            for a in p.quiver.arrows
        ],
        "relations": rels,
    }


def presentation_from_json(data: dict) -> Presentation:
    quiver = Quiver(
        tuple(data["points"]),
        tuple(Arrow(a["name"], a["source"], a["target"]) for a in data["arrows"]),
    )
    rels: list[Relation] = []
    for rel in data["relations"]:
        if rel["kind"] == "zero":
            rels.append(ZeroRelation(tuple(rel["path"])))
        elif rel["kind"] == "commute":
            rels.append(CommutativityRelation(tuple(rel["lhs"]), tuple(rel["rhs"])))
        else:
            raise PresentationError(f"unknown relation kind {rel['kind']!r}")
    return Presentation(data.get("name", "presentation"), quiver, tuple(rels))
