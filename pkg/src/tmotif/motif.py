"""Temporal motif patterns, anchor selection and extension plans."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Literal, NamedTuple

Direction = Literal["in", "out"]
Side = Literal["before", "after"]
End = Literal["src", "dst"]


class MotifError(ValueError):
    pass


@dataclass(frozen=True)
class Motif:
    """Directed pattern multigraph; ``edges[i]`` is the edge with time order ``i``."""

    nv: int
    edges: tuple[tuple[int, int], ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(a), int(b)) for a, b in self.edges))
        if self.nv not in (3, 4):
            raise MotifError(f"motifs must have 3 or 4 vertices, got {self.nv}")
        used = {x for e in self.edges for x in e}
        if used != set(range(self.nv)):
            missing = sorted(set(range(self.nv)) - used)
            extra = sorted(used - set(range(self.nv)))
            raise MotifError(f"vertex labels must be exactly 0..{self.nv - 1} "
                             f"(missing {missing}, unexpected {extra})")
        if any(a == b for a, b in self.edges):
            raise MotifError("pattern self-loops are not supported")
        if not _connected(self.nv, self.edges):
            raise MotifError("pattern is disconnected")

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def describe(self) -> dict:
        return {"name": self.name, "nv": self.nv, "edges": [list(e) for e in self.edges]}


def _connected(nv: int, edges) -> bool:
    seen = {0}
    frontier = [0]
    while frontier:
        x = frontier.pop()
        for a, b in edges:
            for y, z in ((a, b), (b, a)):
                if y == x and z not in seen:
                    seen.add(z)
                    frontier.append(z)
    return len(seen) == nv


class Arm(NamedTuple):
    end: End          # which endpoint of the center/base edge the arm hangs off
    direction: Direction  # arm edge enters or leaves that endpoint
    side: Side        # arm edge is earlier or later than the center


@dataclass(frozen=True)
class PathClass:
    """Class of delta-centered 3-paths, relative to the center edge ``(u, v)``.

    ``alpha1``/``beta1`` constrain the edge at ``u``; ``alpha3``/``beta3`` the
    edge at ``v``.
    """

    alpha1: Direction
    alpha3: Direction
    beta1: Side
    beta3: Side

    @property
    def arms(self) -> tuple[Arm, ...]:
        return (Arm("src", self.alpha1, self.beta1), Arm("dst", self.alpha3, self.beta3))

    @classmethod
    def all(cls) -> list["PathClass"]:
        return [cls(a1, a3, b1, b3) for a1 in ("in", "out") for a3 in ("in", "out")
                for b1 in ("before", "after") for b3 in ("before", "after")]

    def __str__(self):
        return f"<{self.alpha1},{self.alpha3},{self.beta1},{self.beta3}>"


@dataclass(frozen=True)
class WedgeClass:
    """Class of delta-centered wedges: one arm at the ``pivot`` end of the base edge."""

    alpha: Direction
    beta: Side
    pivot: End = "dst"

    @property
    def arms(self) -> tuple[Arm, ...]:
        return (Arm(self.pivot, self.alpha, self.beta),)

    @classmethod
    def all(cls) -> list["WedgeClass"]:
        return [cls(a, b, p) for p in ("dst", "src") for a in ("in", "out")
                for b in ("before", "after")]

    def __str__(self):
        return f"<{self.alpha},{self.beta}>@{self.pivot}"


class AnchorArm(NamedTuple):
    position: int
    end: End
    far_vertex: int


@dataclass(frozen=True)
class Anchor:
    kind: Literal["wedge", "path3"]
    positions: tuple[int, ...]
    center_position: int
    center: tuple[int, int]
    arms: tuple[AnchorArm, ...]
    cls: PathClass | WedgeClass

    def describe(self) -> dict:
        return {"kind": self.kind, "positions": list(self.positions),
                "center_position": self.center_position, "class": str(self.cls)}


class PlanStep(NamedTuple):
    position: int
    src: int
    dst: int
    below: int
    above: int | None


@dataclass(frozen=True)
class ExtensionPlan:
    steps: tuple[PlanStep, ...]

    @property
    def r(self) -> int:
        return len(self.steps)


def _as_anchor(m: Motif, positions: tuple[int, ...]) -> Anchor | None:
    es = [m.edges[p] for p in positions]
    deg: dict[int, int] = {}
    for a, b in es:
        deg[a] = deg.get(a, 0) + 1
        deg[b] = deg.get(b, 0) + 1
    if len(deg) != m.nv or not _connected_sub(es):
        return None

    if m.nv == 3:
        base_pos, other_pos = positions  # sorted, so base is the earliest edge
        a, b = m.edges[base_pos]
        x, y = m.edges[other_pos]
        shared = ({a, b} & {x, y}).pop()
        far = y if x == shared else x
        direction = "in" if y == shared else "out"
        side = "before" if other_pos < base_pos else "after"
        pivot = "src" if shared == a else "dst"
        arm = AnchorArm(other_pos, pivot, far)
        return Anchor("wedge", positions, base_pos, (a, b), (arm,),
                      WedgeClass(direction, side, pivot))

    # 3 edges on 4 distinct vertices: a simple path iff the center has both ends of degree 2
    centers = [p for p in positions if all(deg[x] == 2 for x in m.edges[p])]
    if len(centers) != 1:
        return None
    c = centers[0]
    a, b = m.edges[c]
    arms = []
    fields = {}
    for p in positions:
        if p == c:
            continue
        x, y = m.edges[p]
        shared = a if a in (x, y) else b
        far = y if x == shared else x
        direction = "in" if y == shared else "out"
        side = "before" if p < c else "after"
        end = "src" if shared == a else "dst"
        arms.append(AnchorArm(p, end, far))
        fields[end] = (direction, side)
    if set(fields) != {"src", "dst"}:
        return None
    arms.sort(key=lambda arm: arm.end != "src")
    cls = PathClass(fields["src"][0], fields["dst"][0], fields["src"][1], fields["dst"][1])
    return Anchor("path3", positions, c, (a, b), tuple(arms), cls)


def _connected_sub(es) -> bool:
    verts = {x for e in es for x in e}
    start = next(iter(verts))
    seen = {start}
    frontier = [start]
    while frontier:
        x = frontier.pop()
        for a, b in es:
            for y, z in ((a, b), (b, a)):
                if y == x and z not in seen:
                    seen.add(z)
                    frontier.append(z)
    return seen == verts


def choose_anchor(m: Motif) -> Anchor:
    """Spanning wedge (3 vertices) or 3-path (4 vertices) through time order 0.

    Among all candidates the one with the lexicographically smallest sorted
    position tuple wins.
    """
    size = m.nv - 1
    for rest in combinations(range(1, m.num_edges), size - 1):
        anchor = _as_anchor(m, (0,) + rest)
        if anchor is not None:
            return anchor
    kind = "wedge" if m.nv == 3 else "3-path"
    raise MotifError(f"no spanning {kind} contains the earliest edge of motif {m.name or m.edges}")


def build_extension_plan(m: Motif, a: Anchor) -> ExtensionPlan:
    anchored = sorted(a.positions)
    steps = []
    for p in range(m.num_edges):
        if p in a.positions:
            continue
        below = max(q for q in anchored if q < p)
        above = min((q for q in anchored if q > p), default=None)
        steps.append(PlanStep(p, *m.edges[p], below, above))
    return ExtensionPlan(tuple(steps))


def parse_motif(path: str | Path, name: str = "") -> Motif:
    """Read a motif file: one ``u v`` pattern edge per line, earliest first."""
    edges = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith(("#", "%")):
                continue
            parts = line.replace(",", " ").split()
            if len(parts) != 2:
                raise MotifError(f"line {lineno}: expected 'u v', got {line!r}")
            try:
                edges.append((int(parts[0]), int(parts[1])))
            except ValueError:
                raise MotifError(f"line {lineno}: non-integer vertex in {line!r}") from None
    if not edges:
        raise MotifError(f"no edges in {path}")
    nv = max(x for e in edges for x in e) + 1
    return Motif(nv, tuple(edges), name or Path(path).stem)


# Pattern vertices A, B, C, D are 0, 1, 2, 3.  List order is time order.
PRESETS: dict[str, Motif] = {
    m.name: m for m in (
        Motif(3, ((0, 1), (1, 2), (1, 2), (2, 0)), "M3-0"),
        Motif(3, ((0, 1), (2, 1), (1, 2), (0, 2)), "M3-1"),
        Motif(4, ((0, 1), (1, 2), (2, 3), (3, 0)), "M4-0"),
        Motif(4, ((0, 1), (1, 2), (2, 3), (3, 2), (2, 1), (1, 0), (0, 1), (1, 2), (2, 3)),
              "M4-1"),
        Motif(4, ((0, 1), (0, 1), (1, 2), (1, 2), (2, 3), (2, 3), (3, 0), (3, 0)), "M4-2"),
        Motif(4, ((1, 2), (0, 1), (2, 3), (3, 0), (2, 0)), "M4-3"),
        Motif(4, ((0, 1), (1, 2), (2, 3), (3, 0), (0, 2),
                  (1, 0), (2, 1), (3, 2), (0, 3), (2, 0)), "M4-4"),
        Motif(4, ((0, 1), (0, 2), (0, 3), (3, 2), (1, 0)), "M4-5"),
    )
}


def resolve_motif(spec: str) -> Motif:
    """Preset name (case-insensitive, ``M4-0`` or ``m40``) or a motif file path."""
    norm = spec.upper().replace("_", "-")
    if not norm.count("-") and len(norm) == 3 and norm[0] == "M":
        norm = f"M{norm[1]}-{norm[2]}"
    if norm in PRESETS:
        return PRESETS[norm]
    if Path(spec).is_file():
        return parse_motif(spec)
    raise MotifError(f"unknown motif {spec!r}: not a preset ({', '.join(PRESETS)}) or a file")
