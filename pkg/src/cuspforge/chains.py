"""Cellular chain complexes, exact homology, cubical cup products,
and inclusion-induced maps.

One ``ChainComplexData`` carries integer incidence data for any of the
cell-complex types in this library; GF(2) work reads the same data mod
2 through bit-packed rows.  d(d(x)) = 0 is verified at build time.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from . import gf2
from .cubical import CubicalComplex
from .errors import BudgetError, ValidationError
from .simplicial import SimplicialComplex
from .snf import SNFResult, kernel_basis, smith_normal_form, solve

Entry = Tuple[int, int]  # (face index, incidence number)


@dataclass
class ChainComplexData:
    """Ordered cell bases and boundary maps of a finite complex.

    ``boundaries[k][i]`` lists (index into dimension k-1, coefficient)
    for the i-th k-cell; coefficients are always the integral incidence
    numbers, and the ``coeff`` tag records how downstream computations
    should interpret them ("Z" or "Z2").
    """

    coeff: str
    cell_keys: List[Tuple[Hashable, ...]]
    boundaries: List[Tuple[Tuple[Entry, ...], ...]]
    _index: List[Dict[Hashable, int]] = field(default_factory=list, repr=False)
    _gf2_rows: Dict[int, List[int]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.coeff not in ("Z", "Z2"):
            raise ValidationError("coefficients must be 'Z' or 'Z2'")
        if not self._index:
            self._index = [{key: i for i, key in enumerate(keys)} for keys in self.cell_keys]

    @property
    def top_dim(self) -> int:
        return len(self.cell_keys) - 1

    def size(self, k: int) -> int:
        if 0 <= k <= self.top_dim:
            return len(self.cell_keys[k])
        return 0

    def sizes(self) -> Tuple[int, ...]:
        return tuple(len(keys) for keys in self.cell_keys)

    def index_of(self, k: int, key: Hashable) -> int:
        return self._index[k][key]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.sizes()))

    def gf2_rows(self, k: int) -> List[int]:
        """Boundary of each k-cell as a bitset over (k-1)-cells."""
        if k not in self._gf2_rows:
            rows = []
            if 1 <= k <= self.top_dim:
                for entries in self.boundaries[k]:
                    acc = 0
                    for idx, coeff in entries:
                        if coeff & 1:
                            acc ^= 1 << idx
                    rows.append(acc)
            self._gf2_rows[k] = rows
        return self._gf2_rows[k]

    def dense_boundary(self, k: int) -> List[List[int]]:
        """Integer matrix of d_k, shape (n_{k-1}, n_k)."""
        n_rows = self.size(k - 1)
        n_cols = self.size(k)
        mat = [[0] * n_cols for _ in range(n_rows)]
        if 1 <= k <= self.top_dim:
            for j, entries in enumerate(self.boundaries[k]):
                for idx, coeff in entries:
                    mat[idx][j] += coeff
        return mat

    def verify_dd_zero(self) -> None:
        for k in range(2, self.top_dim + 1):
            for entries in self.boundaries[k]:
                acc: Dict[int, int] = {}
                for idx, coeff in entries:
                    for idx2, coeff2 in self.boundaries[k - 1][idx]:
                        acc[idx2] = acc.get(idx2, 0) + coeff * coeff2
                if any(v != 0 for v in acc.values()):
                    raise ValidationError(f"dd != 0 in dimension {k}")


def chain_complex_of(X, coeff: str = "Z2") -> ChainComplexData:
    """Build the cellular chain complex of a complex object.

    Simplicial boundaries use the alternating-sign convention on sorted
    vertices; cubical ones alternate over the ordered support, with the
    +1 face positive.  Other complex types supply their own incidence
    data via ``to_chain_data``.
    """
    if isinstance(X, SimplicialComplex):
        data = _simplicial_chain_data(X, coeff)
    elif isinstance(X, CubicalComplex):
        data = _cubical_chain_data(X, coeff)
    elif hasattr(X, "to_chain_data"):
        data = X.to_chain_data(coeff)
    else:
        raise ValidationError(f"no chain-complex builder for {type(X).__name__}")
    data.verify_dd_zero()
    return data


def _simplicial_chain_data(K: SimplicialComplex, coeff: str) -> ChainComplexData:
    cell_keys: List[Tuple] = []
    boundaries: List[Tuple] = []
    index_prev: Dict = {}
    for k in range(K.dim + 1):
        faces = K.faces_of_dim(k)
        index_here = {f: i for i, f in enumerate(faces)}
        rows = []
        for f in faces:
            if k == 0:
                rows.append(())
            else:
                entries = []
                for j in range(len(f)):
                    sub = f[:j] + f[j + 1:]
                    entries.append((index_prev[sub], (-1) ** j))
                rows.append(tuple(entries))
        cell_keys.append(tuple(faces))
        boundaries.append(tuple(rows))
        index_prev = index_here
    return ChainComplexData(coeff, cell_keys, boundaries)


def _cubical_chain_data(Z: CubicalComplex, coeff: str) -> ChainComplexData:
    cell_keys: List[Tuple] = []
    boundaries: List[Tuple] = []
    index_prev: Dict = {}
    for k in range(Z.dim + 1):
        cells = Z.cells_of_dim(k)
        index_here = {c: i for i, c in enumerate(cells)}
        rows = []
        for support, signs in cells:
            if k == 0:
                rows.append(())
            else:
                entries = []
                for pos, i in enumerate(support):
                    rest = tuple(x for x in support if x != i)
                    sign = (-1) ** pos
                    entries.append((index_prev[(rest, signs | (1 << i))], sign))
                    entries.append((index_prev[(rest, signs)], -sign))
                rows.append(tuple(entries))
        cell_keys.append(tuple(cells))
        boundaries.append(tuple(rows))
        index_prev = index_here
    return ChainComplexData(coeff, cell_keys, boundaries)


# ---------------------------------------------------------------------------
# homology
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HomologyResult:
    coeff: str
    betti: Tuple[int, ...]
    torsion: Tuple[Tuple[int, ...], ...]  # invariant factors > 1, per degree

    def __str__(self) -> str:
        parts = []
        for k, b in enumerate(self.betti):
            t = "".join(f" + Z/{d}" for d in self.torsion[k])
            parts.append(f"H_{k} = Z^{b}{t}")
        return "; ".join(parts)


INTEGRAL_DENSE_LIMIT = 4_000_000  # matrix entries; beyond this use Z/2 or SNF directly


def homology(data: ChainComplexData) -> HomologyResult:
    """Betti numbers (and torsion over Z) from the boundary maps."""
    top = data.top_dim
    if data.coeff == "Z2":
        ranks = [0] * (top + 2)
        for k in range(1, top + 1):
            ranks[k] = gf2.rank_of_rows(data.gf2_rows(k))
        betti = tuple(data.size(k) - ranks[k] - ranks[k + 1] for k in range(top + 1))
        return HomologyResult("Z2", betti, tuple(() for _ in range(top + 1)))
    for k in range(1, top + 1):
        if data.size(k - 1) * data.size(k) > INTEGRAL_DENSE_LIMIT:
            raise BudgetError(
                f"integral homology would densify a {data.size(k - 1)}x{data.size(k)} "
                "matrix; use Z/2 coefficients at this scale"
            )
    snfs: List[Optional[SNFResult]] = [None] * (top + 2)
    for k in range(1, top + 1):
        snfs[k] = smith_normal_form(
            data.dense_boundary(k), nrows=data.size(k - 1), ncols=data.size(k)
        )
    def rank(k):
        return snfs[k].rank if snfs[k] is not None else 0
    betti = tuple(data.size(k) - rank(k) - rank(k + 1) for k in range(top + 1))
    torsion = tuple(
        tuple(snfs[k + 1].invariant_factors()) if snfs[k + 1] is not None else ()
        for k in range(top + 1)
    )
    return HomologyResult("Z", betti, torsion)


def betti_z2(data: ChainComplexData) -> Tuple[int, ...]:
    return homology(ChainComplexData("Z2", data.cell_keys, data.boundaries)).betti


# ---------------------------------------------------------------------------
# integral homology with explicit bases (for induced maps and certificates)
# ---------------------------------------------------------------------------


@dataclass
class IntegralHomologyBasis:
    """H_k over Z with cycle representatives and a projection map.

    ``free_generators`` are cycle vectors generating the free part;
    ``project`` sends any integral cycle to (free coords, torsion coords).
    """

    degree: int
    free_rank: int
    torsion: Tuple[int, ...]
    free_generators: List[List[int]]
    _cycle_snf: SNFResult
    _uprime: List[List[int]]
    _dprime: List[int]
    _z: int

    def project(self, cycle: Sequence[int]) -> Tuple[List[int], List[int]]:
        y = solve(self._cycle_snf, list(cycle))
        if y is None:
            raise ValidationError("vector is not an integral cycle")
        u = [sum(self._uprime[i][j] * y[j] for j in range(self._z)) for i in range(self._z)]
        free = [u[i] for i in range(self._z) if self._dprime[i] == 0]
        tors = [u[i] % self._dprime[i] for i in range(self._z) if self._dprime[i] not in (0, 1)]
        return free, tors

    def project_free(self, cycle: Sequence[int]) -> List[int]:
        return self.project(cycle)[0]


def integral_homology_basis(data: ChainComplexData, k: int) -> IntegralHomologyBasis:
    n_k = data.size(k)
    boundary_snf = smith_normal_form(data.dense_boundary(k), nrows=data.size(k - 1), ncols=n_k)
    cycles = kernel_basis(boundary_snf)  # each of length n_k
    z = len(cycles)
    # columns are the cycle basis; relations express boundaries in it
    K = [[cycles[j][i] for j in range(z)] for i in range(n_k)]
    k_snf = smith_normal_form(K, nrows=n_k, ncols=z)
    n_up = data.size(k + 1)
    relations: List[List[int]] = [[0] * n_up for _ in range(z)]
    if n_up:
        up = data.dense_boundary(k + 1)
        for j in range(n_up):
            col = [up[i][j] for i in range(n_k)]
            y = solve(k_snf, col)
            if y is None:
                raise ValidationError("boundary is not a cycle; dd != 0")
            for i in range(z):
                relations[i][j] = y[i]
    r_snf = smith_normal_form(relations, nrows=z, ncols=n_up)
    # quotient coordinates live in u = U'^{-1} y; generator j has order diag_j
    dprime = list(r_snf.diag) + [0] * (z - len(r_snf.diag))
    new_gens = [[sum(cycles[t][i] * r_snf.u[t][j] for t in range(z)) for i in range(n_k)]
                for j in range(z)]
    free_gens = [new_gens[j] for j in range(z) if dprime[j] == 0]
    torsion = tuple(d for d in dprime if d not in (0, 1))
    return IntegralHomologyBasis(
        degree=k,
        free_rank=len(free_gens),
        torsion=torsion,
        free_generators=free_gens,
        _cycle_snf=k_snf,
        _uprime=r_snf.uinv,
        _dprime=dprime,
        _z=z,
    )


# ---------------------------------------------------------------------------
# GF(2) cohomology with representatives
# ---------------------------------------------------------------------------


class CohomologyBasis:
    """Basis of H^k(-; Z/2) with cocycle representatives.

    Representatives are bitsets over the k-cells; ``coordinates`` writes
    any cocycle of the same complex in this basis modulo coboundaries.
    """

    def __init__(self, data: ChainComplexData, k: int):
        self.degree = k
        n_k = data.size(k)
        up_rows = data.gf2_rows(k + 1) if k + 1 <= data.top_dim else []
        if up_rows:
            cocycles = gf2.right_kernel_basis(up_rows, n_k)
        else:
            cocycles = gf2.identity_rows(n_k)
        if 1 <= k <= data.top_dim:
            image_rows = gf2.transpose_rows(data.gf2_rows(k), data.size(k - 1))
        else:
            image_rows = []
        self._pivots: Dict[int, Tuple[int, int]] = {}
        for row in image_rows:
            row = self._reduce_tagged(row, 0)[0]
            if row:
                self._pivots[gf2.lowbit(row)] = (row, 0)
        reps: List[int] = []
        for vec in cocycles:
            red, _ = self._reduce_tagged(vec, 0)
            if red:
                # keep the reduced cocycle so coordinates() is dual to it
                self._pivots[gf2.lowbit(red)] = (red, 1 << len(reps))
                reps.append(red)
        self.representatives = reps
        self.dimension = len(reps)

    def _reduce_tagged(self, v: int, tag: int) -> Tuple[int, int]:
        while v:
            hit = self._pivots.get(gf2.lowbit(v))
            if hit is None:
                break
            v ^= hit[0]
            tag ^= hit[1]
        return v, tag

    def coordinates(self, cocycle: int) -> int:
        """Coefficient bitmask of a cocycle in this basis, mod coboundaries."""
        red, tag = self._reduce_tagged(cocycle, 0)
        if red:
            raise ValidationError("vector is not a cocycle of this complex")
        return tag


def cohomology_z2_basis(data: ChainComplexData, k: int) -> CohomologyBasis:
    return CohomologyBasis(data, k)


def coboundary(data: ChainComplexData, phi: int, k: int) -> int:
    """delta(phi) as a bitset over (k+1)-cells."""
    out = 0
    if k + 1 <= data.top_dim:
        for i, row in enumerate(data.gf2_rows(k + 1)):
            if (row & phi).bit_count() & 1:
                out |= 1 << i
    return out


def is_cocycle(data: ChainComplexData, phi: int, k: int) -> bool:
    return coboundary(data, phi, k) == 0


# ---------------------------------------------------------------------------
# cubical cup product
# ---------------------------------------------------------------------------


def cup_product(data: ChainComplexData, a: int, b: int, k: int, l: int) -> int:
    """Cochain-level cup product on a cube complex.

    On each (k+l)-cell the product sums, over the splittings of the
    support into a front set A (|A| = k) and its complement, the value
    of ``a`` on the front face (complement frozen at -1) times ``b`` on
    the back face (A frozen at +1).  Satisfies the Leibniz rule; graded
    commutativity holds only after passing to cohomology classes.
    """
    if not data.cell_keys or not isinstance(data.cell_keys[0][0], tuple) or len(data.cell_keys[0][0]) != 2:
        raise ValidationError("cup products need cubical chain data")
    if k + l > data.top_dim:
        return 0
    if not is_cocycle(data, a, k):
        warnings.warn("cup factor of degree %d is not a cocycle" % k, stacklevel=2)
    if not is_cocycle(data, b, l):
        warnings.warn("cup factor of degree %d is not a cocycle" % l, stacklevel=2)
    idx_k = data._index[k]
    idx_l = data._index[l]
    out = 0
    for c_i, (support, signs) in enumerate(data.cell_keys[k + l]):
        total = 0
        for front in combinations(support, k):
            front_cell = (front, signs)
            fi = idx_k.get(front_cell)
            if fi is None or not (a >> fi) & 1:
                continue
            back_support = tuple(x for x in support if x not in front)
            back_signs = signs
            for x in front:
                back_signs |= 1 << x
            bi = idx_l.get((back_support, back_signs))
            if bi is not None and (b >> bi) & 1:
                total ^= 1
        if total:
            out |= 1 << c_i
    return out


def pair_with_fundamental_class(data: ChainComplexData, phi: int) -> int:
    """Evaluate a top-degree cochain on the sum of all top cells, mod 2."""
    mask = (1 << data.size(data.top_dim)) - 1
    return (phi & mask).bit_count() & 1


# ---------------------------------------------------------------------------
# subcomplexes and induced maps
# ---------------------------------------------------------------------------


@dataclass
class SubcomplexSelection:
    """A closed selection of parent cells, with its own chain data."""

    parent: ChainComplexData
    indices: List[List[int]]  # per dim, sub index -> parent index
    data: ChainComplexData

    def gather_cochain(self, phi: int, k: int) -> int:
        """Restrict a parent k-cochain to the subcomplex."""
        out = 0
        if k >= len(self.indices):
            return 0
        for sub_i, par_i in enumerate(self.indices[k]):
            if (phi >> par_i) & 1:
                out |= 1 << sub_i
        return out

    def scatter_chain(self, vec: Sequence[int], k: int) -> List[int]:
        """Push a subcomplex k-chain into the parent's basis."""
        out = [0] * self.parent.size(k)
        if k >= len(self.indices):
            return out
        for sub_i, par_i in enumerate(self.indices[k]):
            out[par_i] = vec[sub_i]
        return out


def subcomplex_selection(parent: ChainComplexData, keys_per_dim: Sequence[Sequence[Hashable]]) -> SubcomplexSelection:
    """Validate closure of a cell selection and reindex its chain data."""
    top = len(keys_per_dim) - 1
    indices: List[List[int]] = []
    chosen_sets: List[set] = []
    for k in range(top + 1):
        idx = sorted(parent.index_of(k, key) for key in keys_per_dim[k])
        if len(set(idx)) != len(keys_per_dim[k]):
            raise ValidationError("repeated cell in subcomplex selection")
        indices.append(idx)
        chosen_sets.append(set(idx))
    sub_index: List[Dict[int, int]] = [
        {par: i for i, par in enumerate(indices[k])} for k in range(top + 1)
    ]
    cell_keys = []
    boundaries = []
    for k in range(top + 1):
        keys = tuple(parent.cell_keys[k][par] for par in indices[k])
        rows = []
        for par in indices[k]:
            entries = []
            for idx, coeff in parent.boundaries[k][par]:
                if k > 0 and idx not in chosen_sets[k - 1]:
                    raise ValidationError("selection is not closed under faces")
                if k > 0:
                    entries.append((sub_index[k - 1][idx], coeff))
            rows.append(tuple(entries))
        cell_keys.append(keys)
        boundaries.append(tuple(rows))
    data = ChainComplexData(parent.coeff, cell_keys, boundaries)
    return SubcomplexSelection(parent=parent, indices=indices, data=data)


@dataclass(frozen=True)
class RestrictionMap:
    """H^k(X; Z/2) -> H^k(A; Z/2) in explicit bases.

    ``rows[i]`` is the coefficient bitmask of the image of the i-th
    X-basis vector in the A-basis.
    """

    rows: Tuple[int, ...]
    dim_domain: int
    dim_target: int

    def rank(self) -> int:
        return gf2.rank_of_rows(self.rows)

    def is_surjective(self) -> bool:
        return self.rank() == self.dim_target

    def dense(self) -> List[List[int]]:
        return [[(r >> j) & 1 for j in range(self.dim_target)] for r in self.rows]


def restriction_map_z2(
    selection: SubcomplexSelection, k: int, parent_basis: Optional[CohomologyBasis] = None
) -> RestrictionMap:
    """Matrix of the restriction H^k(X) -> H^k(A) over Z/2."""
    basis_x = parent_basis if parent_basis is not None else cohomology_z2_basis(selection.parent, k)
    basis_a = cohomology_z2_basis(selection.data, k)
    rows = tuple(
        basis_a.coordinates(selection.gather_cochain(rep, k))
        for rep in basis_x.representatives
    )
    return RestrictionMap(rows=rows, dim_domain=basis_x.dimension, dim_target=basis_a.dimension)


class HomologyZ2Basis:
    """Basis of H_k(-; Z/2) with cycle representatives and coordinates."""

    def __init__(self, data: ChainComplexData, k: int):
        self.degree = k
        if 1 <= k <= data.top_dim:
            cycles = gf2.left_kernel_basis(data.gf2_rows(k))
        else:
            cycles = gf2.identity_rows(data.size(k))
        boundary_rows = data.gf2_rows(k + 1) if k + 1 <= data.top_dim else []
        self._pivots: Dict[int, Tuple[int, int]] = {}
        for row in boundary_rows:
            row, _ = self._reduce_tagged(row, 0)
            if row:
                self._pivots[gf2.lowbit(row)] = (row, 0)
        reps: List[int] = []
        for vec in cycles:
            red, _ = self._reduce_tagged(vec, 0)
            if red:
                self._pivots[gf2.lowbit(red)] = (red, 1 << len(reps))
                reps.append(red)
        self.representatives = reps
        self.dimension = len(reps)

    def _reduce_tagged(self, v: int, tag: int) -> Tuple[int, int]:
        while v:
            hit = self._pivots.get(gf2.lowbit(v))
            if hit is None:
                break
            v ^= hit[0]
            tag ^= hit[1]
        return v, tag

    def coordinates(self, cycle: int) -> int:
        red, tag = self._reduce_tagged(cycle, 0)
        if red:
            raise ValidationError("vector is not a cycle of this complex")
        return tag


def homology_z2_basis(data: ChainComplexData, k: int) -> HomologyZ2Basis:
    return HomologyZ2Basis(data, k)


def inclusion_free_h1_matrix(
    selection: SubcomplexSelection,
    k: int = 1,
    parent_basis: Optional[IntegralHomologyBasis] = None,
) -> Tuple[List[List[int]], IntegralHomologyBasis, IntegralHomologyBasis]:
    """Free part of H_k(A; Z) -> H_k(X; Z): columns are images of A's
    free generators in X's free coordinates."""
    ha = integral_homology_basis(selection.data, k)
    hx = parent_basis if parent_basis is not None else integral_homology_basis(selection.parent, k)
    cols = [hx.project_free(selection.scatter_chain(g, k)) for g in ha.free_generators]
    matrix = [[cols[j][i] for j in range(len(cols))] for i in range(hx.free_rank)]
    return matrix, ha, hx


@dataclass(frozen=True)
class InducedMaps:
    """Both directions of an inclusion A <= X in degree k.

    ``restriction`` is H^k(X) -> H^k(A); ``inclusion_rows[i]`` is the
    image of the i-th H_k(A) basis vector in H_k(X) coordinates (Z/2
    coefficient bitmasks, or integer free-part rows over Z).
    """

    coeff: str
    degree: int
    restriction: Optional[RestrictionMap]
    inclusion_rows: Tuple = ()
    inclusion_domain: int = 0
    inclusion_target: int = 0


def induced_map(selection: SubcomplexSelection, k: int, coeff: str = "Z2") -> InducedMaps:
    """Matrices of the maps induced by a subcomplex inclusion.

    Over Z/2 both the cohomology restriction and the homology inclusion
    are computed; over Z the inclusion acts on the free parts (the
    carrier of the summand certificate) and restriction is omitted.
    """
    if coeff == "Z2":
        restriction = restriction_map_z2(selection, k)
        hx = homology_z2_basis(selection.parent, k)
        ha = homology_z2_basis(selection.data, k)
        rows = []
        for rep in ha.representatives:
            vec = 0
            for sub_i, par_i in enumerate(selection.indices[k] if k < len(selection.indices) else []):
                if (rep >> sub_i) & 1:
                    vec |= 1 << par_i
            rows.append(hx.coordinates(vec))
        return InducedMaps(
            coeff="Z2",
            degree=k,
            restriction=restriction,
            inclusion_rows=tuple(rows),
            inclusion_domain=ha.dimension,
            inclusion_target=hx.dimension,
        )
    if coeff != "Z":
        raise ValidationError("coefficients must be 'Z' or 'Z2'")
    matrix, ha_z, hx_z = inclusion_free_h1_matrix(selection, k)
    rows = tuple(
        tuple(matrix[i][j] for i in range(hx_z.free_rank)) for j in range(ha_z.free_rank)
    )
    return InducedMaps(
        coeff="Z",
        degree=k,
        restriction=None,
        inclusion_rows=rows,
        inclusion_domain=ha_z.free_rank,
        inclusion_target=hx_z.free_rank,
    )
