"""Hypergraph and coloring value types, properness checks and text formats.

Vertices are 1-indexed everywhere in the public API and in files, following
the DIMACS convention. Colors are 0-indexed integers in ``[0, k)``.

Hypergraph file format::

    c optional comment lines, anywhere
    p hg <num_vertices> <num_edges>
    1 3
    2 3 4

Coloring file format: one ``<vertex_id> <color_id>`` line per vertex, sorted
by vertex id.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .exceptions import ContractError, ParseError

__all__ = [
    "Hypergraph",
    "Coloring",
    "Verdict",
    "verify_proper",
    "read_hypergraph",
    "write_hypergraph",
    "read_coloring",
    "write_coloring",
]


def _canonical_edge(edge, num_vertices):
    try:
        ids = sorted(int(v) for v in edge)
    except (TypeError, ValueError) as exc:
        raise ContractError(f"edge {edge!r} is not a collection of integers") from exc
    if len(ids) < 2:
        raise ContractError(f"edge {list(edge)} has size {len(ids)} < 2")
    for a, b in zip(ids, ids[1:]):
        if a == b:
            raise ContractError(f"edge {list(edge)} repeats vertex {a}")
    if ids[0] < 1 or ids[-1] > num_vertices:
        bad = ids[0] if ids[0] < 1 else ids[-1]
        raise ContractError(f"vertex {bad} out of range [1, {num_vertices}]")
    return tuple(ids)


@dataclass(frozen=True)
class Hypergraph:
    """Immutable hypergraph on vertices ``1..num_vertices``.

    Edges are stored as strictly increasing tuples of vertex ids, in input
    order. Duplicate edges are kept as given.
    """

    num_vertices: int
    edges: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        if int(self.num_vertices) < 1:
            raise ContractError(f"num_vertices must be positive, got {self.num_vertices}")
        object.__setattr__(self, "num_vertices", int(self.num_vertices))
        object.__setattr__(
            self, "edges", tuple(_canonical_edge(e, self.num_vertices) for e in self.edges)
        )

    @classmethod
    def _trusted(cls, num_vertices: int, edges) -> "Hypergraph":
        # Skips validation; callers guarantee canonical edges.
        obj = object.__new__(cls)
        object.__setattr__(obj, "num_vertices", int(num_vertices))
        object.__setattr__(obj, "edges", tuple(edges))
        return obj

    @property
    def dimension(self) -> int:
        """Largest edge size, 0 for an edgeless hypergraph."""
        return max((len(e) for e in self.edges), default=0)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        """Number of edges containing each vertex (index ``v - 1``)."""
        deg = np.zeros(self.num_vertices, dtype=np.int64)
        for e in self.edges:
            for v in e:
                deg[v - 1] += 1
        return deg

    def __len__(self):
        return len(self.edges)


class Coloring:
    """Total map from vertex id (1-based) to color id in ``[0, k)``.

    Backed by a read-only integer array where ``labels[v - 1]`` is the color
    of vertex ``v``.
    """

    __slots__ = ("_labels", "_k")

    def __init__(self, labels: Sequence[int] | np.ndarray, k: int | None = None):
        arr = np.array(labels, dtype=np.int64).reshape(-1)
        if arr.size and arr.min() < 0:
            raise ContractError("color ids must be nonnegative")
        needed = int(arr.max()) + 1 if arr.size else 0
        if k is None:
            k = max(2, needed)
        if k < 2:
            raise ContractError(f"k must be at least 2, got {k}")
        if needed > k:
            raise ContractError(f"color id {needed - 1} outside [0, {k - 1}]")
        arr.setflags(write=False)
        self._labels = arr
        self._k = int(k)

    @classmethod
    def from_mapping(cls, colors: Mapping[int, int], k: int | None = None) -> "Coloring":
        """Build from ``{vertex: color}``; keys must be exactly ``1..N``."""
        n = len(colors)
        labels = np.empty(n, dtype=np.int64)
        for v in range(1, n + 1):
            if v not in colors:
                raise ContractError(f"vertex {v} has no color")
            labels[v - 1] = colors[v]
        return cls(labels, k)

    @classmethod
    def from_parts(cls, parts: Sequence[Iterable[int]], num_vertices: int) -> "Coloring":
        """Color vertices in ``parts[c]`` with color ``c``."""
        labels = np.full(num_vertices, -1, dtype=np.int64)
        for c, part in enumerate(parts):
            for v in part:
                labels[v - 1] = c
        missing = np.flatnonzero(labels < 0)
        if missing.size:
            raise ContractError(f"vertex {missing[0] + 1} has no color")
        return cls(labels, k=len(parts))

    @property
    def labels(self) -> np.ndarray:
        return self._labels

    @property
    def k(self) -> int:
        return self._k

    @property
    def num_vertices(self) -> int:
        return self._labels.size

    def __getitem__(self, vertex: int) -> int:
        if not 1 <= vertex <= self._labels.size:
            raise ContractError(f"vertex {vertex} has no color")
        return int(self._labels[vertex - 1])

    def __len__(self):
        return self._labels.size

    def parts(self) -> list[frozenset[int]]:
        """Vertex sets per color, ``parts()[c]`` holding the vertices of color ``c``."""
        return [frozenset((np.flatnonzero(self._labels == c) + 1).tolist()) for c in range(self._k)]

    def relabel(self, permutation: Sequence[int]) -> "Coloring":
        """Return the coloring with color ``c`` replaced by ``permutation[c]``."""
        perm = np.asarray(permutation, dtype=np.int64)
        return Coloring(perm[self._labels], self._k)

    def as_dict(self) -> dict[int, int]:
        return {v + 1: int(c) for v, c in enumerate(self._labels)}

    def __eq__(self, other):
        if not isinstance(other, Coloring):
            return NotImplemented
        return self._k == other._k and np.array_equal(self._labels, other._labels)

    def __hash__(self):
        return hash((self._k, self._labels.tobytes()))

    def __repr__(self):
        return f"Coloring(k={self._k}, labels={self._labels.tolist()})"


class Verdict(NamedTuple):
    proper: bool
    monochromatic_edges: list[int]


def verify_proper(h: Hypergraph, c: Coloring) -> Verdict:
    """Check that no edge of ``h`` has all its vertices in one color class.

    Returns the indices (in input order) of every monochromatic edge.
    """
    if len(c) < h.num_vertices:
        raise ContractError(f"vertex {len(c) + 1} has no color")
    labels = c.labels
    mono = []
    for idx, e in enumerate(h.edges):
        first = labels[e[0] - 1]
        if all(labels[v - 1] == first for v in e[1:]):
            mono.append(idx)
    return Verdict(not mono, mono)


def _content_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line == "c" or line.startswith("c "):
            continue
        yield lineno, line


def read_hypergraph(text: str) -> Hypergraph:
    """Parse the ``p hg`` text format. Edge vertex order is canonicalized."""
    lines = _content_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError("missing 'p hg <num_vertices> <num_edges>' header", 1) from None
    parts = header.split()
    if len(parts) != 4 or parts[:2] != ["p", "hg"]:
        raise ParseError(f"malformed header {header!r}", lineno)
    try:
        num_vertices, num_edges = int(parts[2]), int(parts[3])
    except ValueError:
        raise ParseError(f"malformed header {header!r}", lineno) from None
    if num_vertices < 1 or num_edges < 0:
        raise ParseError(f"malformed header {header!r}", lineno)

    edges = []
    for lineno, line in lines:
        if len(edges) == num_edges:
            raise ParseError(f"more than the declared {num_edges} edges", lineno)
        try:
            ids = [int(tok) for tok in line.split()]
        except ValueError:
            raise ParseError(f"non-integer vertex id in {line!r}", lineno) from None
        for v in ids:
            if not 1 <= v <= num_vertices:
                raise ParseError(f"vertex {v} out of range", lineno)
        if len(set(ids)) != len(ids):
            raise ParseError(f"edge {ids} repeats a vertex", lineno)
        if len(ids) < 2:
            raise ParseError(f"edge of size {len(ids)} < 2", lineno)
        edges.append(tuple(sorted(ids)))
    if len(edges) != num_edges:
        raise ParseError(f"expected {num_edges} edges, found {len(edges)}")
    return Hypergraph._trusted(num_vertices, edges)


def write_hypergraph(h: Hypergraph, comments: Iterable[str] = ()) -> str:
    out = [f"c {c}" for c in comments]
    out.append(f"p hg {h.num_vertices} {h.num_edges}")
    out.extend(" ".join(map(str, e)) for e in h.edges)
    return "\n".join(out) + "\n"


def read_coloring(text: str, k: int | None = None) -> Coloring:
    colors = {}
    for lineno, line in _content_lines(text):
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected '<vertex> <color>', got {line!r}", lineno)
        try:
            v, col = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer entry in {line!r}", lineno) from None
        if v in colors:
            raise ParseError(f"vertex {v} colored twice", lineno)
        if col < 0:
            raise ParseError(f"negative color {col}", lineno)
        colors[v] = col
    try:
        return Coloring.from_mapping(colors, k)
    except ContractError as exc:
        raise ParseError(str(exc)) from None


def write_coloring(c: Coloring) -> str:
    return "".join(f"{v} {col}\n" for v, col in enumerate(c.labels.tolist(), start=1))
