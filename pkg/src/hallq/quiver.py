"""Quiver data model, textual DSL, and the exact shape classifier.

The classifier recognizes the four connected shapes whose span-of-decomposables
is a subring/ideal: linear chains L(m), oriented cycles Delta(n), chains with a
single interior sink V(m,x), and chains with a single interior source
Lambda(n,y).  `predict` turns the component multiset into the three global
verdict booleans.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .errors import QuiverSyntaxError, ValidationError


@dataclass(frozen=True)
class Arrow:
    label: str
    src: str
    tgt: str


class Quiver:
    """A finite directed graph; loops and parallel arrows permitted."""

    def __init__(self, name: str, vertices, arrows):
        self.name = name
        self.vertices = tuple(vertices)
        self.arrows = tuple(arrows)
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise ValidationError(f"duplicate vertex in quiver {name!r}")
        labels = set()
        for a in self.arrows:
            if a.label in labels:
                raise ValidationError(f"duplicate arrow label {a.label!r}")
            labels.add(a.label)
            if a.src not in vset:
                raise ValidationError(f"arrow {a.label!r}: unknown vertex {a.src!r}")
            if a.tgt not in vset:
                raise ValidationError(f"arrow {a.label!r}: unknown vertex {a.tgt!r}")
        self._vindex = {v: i for i, v in enumerate(self.vertices)}
        self._key = (self.vertices, self.arrows)

    def vertex_index(self, v: str) -> int:
        return self._vindex[v]

    def arrows_from(self, v: str):
        return [a for a in self.arrows if a.src == v]

    def arrows_into(self, v: str):
        return [a for a in self.arrows if a.tgt == v]

    def arrow(self, label: str) -> Arrow:
        for a in self.arrows:
            if a.label == label:
                return a
        raise ValidationError(f"no arrow labelled {label!r}")

    def is_acyclic(self) -> bool:
        indeg = {v: 0 for v in self.vertices}
        for a in self.arrows:
            indeg[a.tgt] += 1
        queue = [v for v in self.vertices if indeg[v] == 0]
        seen = 0
        while queue:
            v = queue.pop()
            seen += 1
            for a in self.arrows_from(v):
                indeg[a.tgt] -= 1
                if indeg[a.tgt] == 0:
                    queue.append(a.tgt)
        return seen == len(self.vertices)

    def opposite(self) -> "Quiver":
        return Quiver(
            self.name + "_op",
            self.vertices,
            [Arrow(a.label, a.tgt, a.src) for a in self.arrows],
        )

    def connected_components(self):
        """Partition by underlying-graph connectivity, ordered by smallest vertex."""
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a in self.arrows:
            ra, rb = find(a.src), find(a.tgt)
            if ra != rb:
                parent[ra] = rb
        groups: dict = {}
        for v in self.vertices:
            groups.setdefault(find(v), []).append(v)
        comps = sorted(groups.values(), key=lambda g: self._vindex[g[0]])
        out = []
        for i, verts in enumerate(comps):
            vset = set(verts)
            arrows = [a for a in self.arrows if a.src in vset]
            out.append(Quiver(f"{self.name}#{i}", verts, arrows))
        return out

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "vertices": list(self.vertices),
            "arrows": [{"label": a.label, "src": a.src, "tgt": a.tgt} for a in self.arrows],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Quiver":
        return cls(
            data["name"],
            data["vertices"],
            [Arrow(a["label"], a["src"], a["tgt"]) for a in data["arrows"]],
        )

    def canonical_bytes(self) -> bytes:
        return json.dumps({"vertices": list(self.vertices),
                           "arrows": [(a.label, a.src, a.tgt) for a in self.arrows]},
                          sort_keys=True).encode()

    def __eq__(self, other):
        return isinstance(other, Quiver) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Quiver({self.name!r}, |V|={len(self.vertices)}, |A|={len(self.arrows)})"


def parse_quiver(text: str) -> Quiver:
    """Parse the line-oriented quiver DSL.

    Grammar: `quiver <name>`, `vertex <id>+`, `arrow <label>: <src> -> <tgt>`,
    `#` comments; identifiers are alphanumeric (plus `_`).
    """
    name: Optional[str] = None
    vertices: list = []
    vset: set = set()
    arrows: list = []
    labels: set = set()

    def ident_ok(tok: str) -> bool:
        return tok.replace("_", "").isalnum()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        tokens = line.split()
        head = tokens[0]
        if head == "quiver":
            if len(tokens) != 2:
                raise QuiverSyntaxError("expected `quiver <name>`", lineno, col)
            if name is not None:
                raise QuiverSyntaxError("duplicate `quiver` line", lineno, col)
            name = tokens[1]
        elif head == "vertex":
            if len(tokens) < 2:
                raise QuiverSyntaxError("expected `vertex <id>+`", lineno, col)
            for tok in tokens[1:]:
                if not ident_ok(tok):
                    raise QuiverSyntaxError(f"bad vertex identifier {tok!r}",
                                            lineno, raw.index(tok) + 1)
                if tok in vset:
                    raise QuiverSyntaxError(f"duplicate vertex {tok!r}",
                                            lineno, raw.index(tok) + 1)
                vset.add(tok)
                vertices.append(tok)
        elif head == "arrow":
            # arrow <label>: <src> -> <tgt>
            rest = line.split(None, 1)[1] if len(tokens) > 1 else ""
            if ":" not in rest:
                raise QuiverSyntaxError("expected `arrow <label>: <src> -> <tgt>`",
                                        lineno, col)
            label_part, spec = rest.split(":", 1)
            label = label_part.strip()
            if not label or not ident_ok(label):
                raise QuiverSyntaxError(f"bad arrow label {label!r}", lineno, col)
            if label in labels:
                raise QuiverSyntaxError(f"duplicate arrow label {label!r}", lineno,
                                        raw.index(label) + 1)
            parts = spec.split("->")
            if len(parts) != 2:
                raise QuiverSyntaxError("expected `<src> -> <tgt>`", lineno,
                                        raw.index(":") + 2)
            src, tgt = parts[0].strip(), parts[1].strip()
            for tok in (src, tgt):
                if not tok or not ident_ok(tok):
                    raise QuiverSyntaxError(f"bad vertex identifier {tok!r}", lineno,
                                            raw.index(":") + 2)
                if tok not in vset:
                    raise QuiverSyntaxError(f"unknown vertex {tok!r}", lineno,
                                            raw.index(tok, raw.index(":")) + 1)
            labels.add(label)
            arrows.append(Arrow(label, src, tgt))
        else:
            raise QuiverSyntaxError(f"unknown directive {head!r}", lineno, col)
    if name is None:
        raise QuiverSyntaxError("missing `quiver <name>` line", 1, 1)
    return Quiver(name, vertices, arrows)


def opposite(q: Quiver) -> Quiver:
    return q.opposite()


def connected_components(q: Quiver):
    return q.connected_components()


@dataclass(frozen=True)
class Shape:
    """A classified connected component: kind in {L, Delta, V, Lambda, Other}."""

    kind: str
    size: int = 0
    position: int = 0         # interior sink/source position, canonicalized
    reason: str = ""          # only for Other; not part of the stable API

    def __str__(self):
        if self.kind == "L":
            return f"L({self.size})"
        if self.kind == "Delta":
            return f"Delta({self.size})"
        if self.kind == "V":
            return f"V({self.size},{self.position})"
        if self.kind == "Lambda":
            return f"Lambda({self.size},{self.position})"
        return f"Other({self.reason})"


@dataclass(frozen=True)
class ShapeVerdict:
    shapes: tuple
    ideal_all_r: bool
    subring_r1: bool
    subring_all_r: bool

    def to_json(self) -> dict:
        return {
            "components": [str(s) for s in self.shapes],
            "ideal_all_r": self.ideal_all_r,
            "subring_r1": self.subring_r1,
            "subring_all_r": self.subring_all_r,
        }


def classify_shape(component: Quiver) -> Shape:
    """Classify one connected quiver as L / Delta / V / Lambda / Other."""
    if len(component.connected_components()) != 1:
        raise ValidationError("classify_shape requires a connected quiver")
    nv = len(component.vertices)
    na = len(component.arrows)
    loops = [a for a in component.arrows if a.src == a.tgt]

    if loops:
        if nv == 1 and na == 1:
            return Shape("Delta", 0)
        return Shape("Other", reason="loop plus extra structure")

    # multi-edges in the underlying graph (parallel or anti-parallel arrows)
    undirected = [frozenset((a.src, a.tgt)) for a in component.arrows]
    if len(set(undirected)) != len(undirected):
        if nv == 2 and na == 2 and len(set(undirected)) == 1:
            a, b = component.arrows
            if a.src == b.tgt and a.tgt == b.src:
                return Shape("Delta", 1)
            return Shape("Other", reason="parallel arrows")
        return Shape("Other", reason="parallel arrows")

    degree = {v: 0 for v in component.vertices}
    for a in component.arrows:
        degree[a.src] += 1
        degree[a.tgt] += 1

    if na == nv and all(d == 2 for d in degree.values()):
        indeg = {v: 0 for v in component.vertices}
        outdeg = {v: 0 for v in component.vertices}
        for a in component.arrows:
            outdeg[a.src] += 1
            indeg[a.tgt] += 1
        if all(indeg[v] == 1 and outdeg[v] == 1 for v in component.vertices):
            return Shape("Delta", nv - 1)
        return Shape("Other", reason="unoriented cycle")

    if na != nv - 1:
        return Shape("Other", reason="contains a cycle with extra arrows")
    if any(d > 2 for d in degree.values()):
        return Shape("Other", reason="branch vertex")

    # underlying graph is a simple path; walk it from one endpoint
    if nv == 1:
        return Shape("L", 1)
    endpoints = [v for v in component.vertices if degree[v] == 1]
    neighbours: dict = {v: [] for v in component.vertices}
    for a in component.arrows:
        neighbours[a.src].append(a.tgt)
        neighbours[a.tgt].append(a.src)
    start = endpoints[0]
    order = [start]
    prev = None
    while len(order) < nv:
        nxt = [w for w in neighbours[order[-1]] if w != prev]
        prev = order[-1]
        order.append(nxt[0])

    directed = {(a.src, a.tgt) for a in component.arrows}
    pattern = [(order[i], order[i + 1]) in directed for i in range(nv - 1)]
    # pattern[i]: arrow points forward along the walk
    m = nv
    sinks = [i for i in range(1, m - 1)
             if pattern[i - 1] and not pattern[i]]
    sources = [i for i in range(1, m - 1)
               if not pattern[i - 1] and pattern[i]]
    if not sinks and not sources:
        return Shape("L", m)
    if len(sinks) == 1 and not sources:
        x = sinks[0] + 1
        return Shape("V", m, min(x, m + 1 - x))
    if len(sources) == 1 and not sinks:
        y = sources[0] + 1
        return Shape("Lambda", m, min(y, m + 1 - y))
    return Shape("Other", reason=">=2 sinks and >=2 sources"
                 if len(sinks) >= 2 and len(sources) >= 2
                 else ">=2 interior direction changes")


def predict(q: Quiver) -> ShapeVerdict:
    """Global subring/ideal verdicts from the component shape multiset."""
    shapes = tuple(classify_shape(c) for c in q.connected_components())
    kinds = {s.kind for s in shapes}
    ideal = kinds <= {"L", "Delta"}
    subring1 = kinds <= {"L", "Delta", "V", "Lambda"}
    subring_all = (kinds <= {"L", "Delta", "V"}) or (kinds <= {"L", "Delta", "Lambda"})
    return ShapeVerdict(shapes, ideal, subring1, subring_all)
