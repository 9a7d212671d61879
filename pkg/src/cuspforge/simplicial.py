"""Finite abstract simplicial complexes.

A complex is stored by its inclusion-maximal faces (facets) over vertices
0..vertex_count-1; all lower faces are generated by downward closure and
kept in sorted order so that derived data is reproducible byte for byte.
"""

from __future__ import annotations

import json
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .errors import ValidationError


class SimplicialComplex:
    """Immutable abstract simplicial complex.

    Faces of dimension k are exposed as sorted tuples of k+1 vertex
    indices.  The empty face is implicit and never listed.
    """

    __slots__ = ("vertex_count", "facets", "_faces_by_dim", "_face_set")

    def __init__(self, vertex_count: int, facets: Sequence[Iterable[int]]):
        if vertex_count < 0:
            raise ValidationError("vertex_count must be nonnegative")
        if not facets:
            raise ValidationError("facet list is empty")
        cleaned: List[Tuple[int, ...]] = []
        for f in facets:
            fs = tuple(sorted(set(f)))
            if not fs:
                raise ValidationError("empty facet")
            if fs[0] < 0 or fs[-1] >= vertex_count:
                raise ValidationError(f"facet {fs} out of range for {vertex_count} vertices")
            cleaned.append(fs)
        # drop facets contained in others, then deduplicate
        maximal = [
            f for f in cleaned
            if not any(set(f) < set(g) for g in cleaned)
        ]
        self.vertex_count = vertex_count
        self.facets: Tuple[Tuple[int, ...], ...] = tuple(sorted(set(maximal)))
        by_dim: Dict[int, set] = {}
        for f in self.facets:
            for k in range(1, len(f) + 1):
                by_dim.setdefault(k - 1, set()).update(combinations(f, k))
        self._faces_by_dim: Dict[int, Tuple[Tuple[int, ...], ...]] = {
            d: tuple(sorted(faces)) for d, faces in by_dim.items()
        }
        self._face_set: FrozenSet[Tuple[int, ...]] = frozenset(
            face for faces in self._faces_by_dim.values() for face in faces
        )

    # -- basic queries -------------------------------------------------

    @property
    def dim(self) -> int:
        return max(self._faces_by_dim) if self._faces_by_dim else -1

    def faces_of_dim(self, k: int) -> Tuple[Tuple[int, ...], ...]:
        return self._faces_by_dim.get(k, ())

    def all_faces(self) -> List[Tuple[int, ...]]:
        out: List[Tuple[int, ...]] = []
        for k in range(self.dim + 1):
            out.extend(self.faces_of_dim(k))
        return out

    def has_face(self, face: Iterable[int]) -> bool:
        return tuple(sorted(face)) in self._face_set

    def vertices(self) -> Tuple[int, ...]:
        return tuple(v for (v,) in self.faces_of_dim(0))

    def f_vector(self) -> Tuple[int, ...]:
        return tuple(len(self.faces_of_dim(k)) for k in range(self.dim + 1))

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector()))

    def is_pure(self) -> bool:
        return all(len(f) == self.dim + 1 for f in self.facets)

    def is_closed_pseudomanifold(self) -> bool:
        """Pure, and every ridge lies in exactly two facets."""
        if not self.is_pure() or self.dim < 1:
            return False
        count: Dict[Tuple[int, ...], int] = {}
        for f in self.facets:
            for r in combinations(f, len(f) - 1):
                count[r] = count.get(r, 0) + 1
        return all(c == 2 for c in count.values())

    def is_connected(self) -> bool:
        verts = self.vertices()
        if not verts:
            return True
        adj: Dict[int, set] = {v: set() for v in verts}
        for e in self.faces_of_dim(1):
            adj[e[0]].add(e[1])
            adj[e[1]].add(e[0])
        seen = {verts[0]}
        stack = [verts[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(verts)

    # -- derived complexes ---------------------------------------------

    def link_of_vertex(self, v: int) -> "SimplicialComplex":
        """Link of v: faces tau with v not in tau and tau + {v} a face."""
        if (v,) not in self._face_set:
            raise ValidationError(f"vertex {v} not in complex")
        candidates = [tuple(x for x in f if x != v) for f in self.facets if v in f]
        candidates = [c for c in candidates if c]
        if not candidates:
            raise ValidationError(f"vertex {v} is isolated; its link is empty")
        return SimplicialComplex(self.vertex_count, candidates)

    def full_subcomplex(self, subset: Iterable[int]) -> Optional["SimplicialComplex"]:
        """Restriction to a vertex subset; None if no face survives."""
        sub = set(subset)
        faces = []
        for f in self.facets:
            g = tuple(x for x in f if x in sub)
            if g:
                faces.append(g)
        if not faces:
            return None
        return SimplicialComplex(self.vertex_count, faces)

    def relabel(self, mapping: Dict[int, int], vertex_count: Optional[int] = None) -> "SimplicialComplex":
        m = vertex_count if vertex_count is not None else self.vertex_count
        return SimplicialComplex(m, [tuple(mapping[x] for x in f) for f in self.facets])

    # -- equality and io -----------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SimplicialComplex)
            and self.vertex_count == other.vertex_count
            and self.facets == other.facets
        )

    def __hash__(self) -> int:
        return hash((self.vertex_count, self.facets))

    def __repr__(self) -> str:
        return f"SimplicialComplex(vertices={self.vertex_count}, facets={len(self.facets)}, dim={self.dim})"

    def to_json(self) -> str:
        return json.dumps(
            {"type": "simplicial", "vertices": self.vertex_count,
             "facets": [list(f) for f in self.facets]},
            sort_keys=True, separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, text: str) -> "SimplicialComplex":
        data = json.loads(text)
        if data.get("type") != "simplicial":
            raise ValidationError("not a simplicial-complex document")
        return cls(int(data["vertices"]), [tuple(f) for f in data["facets"]])


def build_simplicial(facet_list: Sequence[Iterable[int]], vertex_count: Optional[int] = None) -> SimplicialComplex:
    """Build a complex from facets, inferring the vertex count if omitted."""
    if not facet_list:
        raise ValidationError("facet list is empty")
    if vertex_count is None:
        vertex_count = 1 + max((max(f) for f in facet_list if f), default=-1)
    return SimplicialComplex(vertex_count, facet_list)


# -- standard examples used throughout the test-bed ---------------------

def boundary_of_simplex(n: int) -> SimplicialComplex:
    """Boundary of the n-simplex on n+1 vertices (an (n-1)-sphere)."""
    verts = range(n + 1)
    return build_simplicial(list(combinations(verts, n)), n + 1)


def cross_polytope_boundary(d: int) -> SimplicialComplex:
    """Boundary of the d-dimensional cross-polytope on vertices 0..2d-1.

    Vertex 2i and 2i+1 are the antipodal pair along axis i; facets pick
    one vertex from each pair.  d=3 is the octahedron.
    """
    facets = []
    for signs in range(1 << d):
        facets.append(tuple(2 * i + ((signs >> i) & 1) for i in range(d)))
    return build_simplicial(facets, 2 * d)


def octahedron_boundary() -> SimplicialComplex:
    return cross_polytope_boundary(3)


def cycle_complex(k: int) -> SimplicialComplex:
    """Boundary of a k-gon: the cycle 0-1-...-(k-1)-0."""
    if k < 3:
        raise ValidationError("cycle needs at least 3 vertices")
    return build_simplicial([(i, (i + 1) % k) for i in range(k)], k)


def two_points() -> SimplicialComplex:
    """S^0: two isolated vertices."""
    return build_simplicial([(0,), (1,)], 2)
