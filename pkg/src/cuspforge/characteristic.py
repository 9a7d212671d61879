"""Orientability, the spin obstruction, and cusp spin-type certificates.

The two cusp labels are certificate-based: a cusp is Bounding when the
filled-in closed manifold is verified spinnable (a spin structure there
restricts and extends over the filling solid tori), and Lie-achievable
when first cohomology of the big manifold surjects onto that of the
cusp torus, so any torus spin structure is realized by restriction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from . import gf2
from .chains import (
    ChainComplexData,
    SubcomplexSelection,
    chain_complex_of,
    cohomology_z2_basis,
    homology,
    inclusion_free_h1_matrix,
    restriction_map_z2,
)
from .errors import CertificateError, ValidationError
from .snf import smith_normal_form

BOUNDING = "Bounding"
LIE = "Lie"
UNDETERMINED = "Undetermined"

REAL_SPECTRUM = "Real"
DISCRETE_SPECTRUM = "Discrete"
UNKNOWN_SPECTRUM = "Unknown"


# ---------------------------------------------------------------------------
# orientability (w1)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrientabilityResult:
    orientable: bool
    top_cells: int
    orientation: Optional[Tuple[int, ...]]  # +-1 per top cell when orientable

    def __bool__(self) -> bool:
        return self.orientable


def orientability(X, data: Optional[ChainComplexData] = None) -> OrientabilityResult:
    """w1 = 0 test: the top integral homology is Z.

    Builds the orientation class directly: propagate compatible signs
    across the two top cells at each ridge and verify the signed sum of
    boundaries vanishes exactly.  Equivalent to rank arguments on the
    Smith normal form of the top boundary, but linear-time.
    """
    if data is None:
        data = chain_complex_of(X, "Z")
    n = data.top_dim
    if n < 1:
        raise ValidationError("orientability needs positive dimension")
    n_top = data.size(n)
    cofaces: Dict[int, List[Tuple[int, int]]] = {}
    for c, entries in enumerate(data.boundaries[n]):
        for idx, coeff in entries:
            if coeff:
                cofaces.setdefault(idx, []).append((c, coeff))
    for idx in range(data.size(n - 1)):
        hits = cofaces.get(idx, [])
        if len(hits) != 2:
            raise ValidationError(
                f"complex is not closed: ridge {idx} lies in {len(hits)} top cells"
            )
    sign = [0] * n_top
    orientable = True
    for seed in range(n_top):
        if sign[seed]:
            continue
        sign[seed] = 1
        stack = [seed]
        while stack and orientable:
            c1 = stack.pop()
            for idx, coeff1 in data.boundaries[n][c1]:
                (a, sa), (b, sb) = cofaces[idx]
                c2, coeff2 = (b, sb) if a == c1 else (a, sa)
                want = -sign[c1] * coeff1 * coeff2
                if sign[c2] == 0:
                    sign[c2] = want
                    stack.append(c2)
                elif sign[c2] != want:
                    orientable = False
                    break
    if not orientable:
        return OrientabilityResult(False, n_top, None)
    total: Dict[int, int] = {}
    for c, entries in enumerate(data.boundaries[n]):
        for idx, coeff in entries:
            total[idx] = total.get(idx, 0) + sign[c] * coeff
    if any(v != 0 for v in total.values()):
        return OrientabilityResult(False, n_top, None)
    return OrientabilityResult(True, n_top, tuple(sign))


# ---------------------------------------------------------------------------
# spin obstruction (w2)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WuReport:
    vanishes: Optional[bool]  # None = undetermined
    provenance: str
    dimension: int
    b2: Optional[int] = None
    diagonal: Optional[Tuple[int, ...]] = None
    wu_class_coords: Optional[int] = None

    def __bool__(self) -> bool:
        return bool(self.vanishes)


def intersection_form(data: ChainComplexData) -> Tuple[List[int], List[int]]:
    """Mod-2 intersection form on H^2 of a closed 4-complex.

    Returns (rows of the Gram matrix as bitmasks, diagonal entries).
    Pairings are evaluated at cochain level against the sum of all top
    cells; class-level well-definedness holds because the arguments are
    cocycles and the complex is closed.
    """
    basis = cohomology_z2_basis(data, 2)
    reps = basis.representatives
    b2 = len(reps)
    idx2 = data._index[2]
    splittings: List[Tuple[int, int]] = []
    from itertools import combinations as _comb

    for support, signs in data.cell_keys[4]:
        for front in _comb(support, 2):
            fi = idx2.get((front, signs))
            back_support = tuple(x for x in support if x not in front)
            back_signs = signs | (1 << front[0]) | (1 << front[1])
            bi = idx2.get((back_support, back_signs))
            if fi is not None and bi is not None:
                splittings.append((fi, bi))
    rows = [0] * b2
    diag = [0] * b2
    for i in range(b2):
        a = reps[i]
        for j in range(i, b2):
            b = reps[j]
            total = 0
            for fi, bi in splittings:
                total ^= ((a >> fi) & 1) & ((b >> bi) & 1)
            if total:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            if i == j:
                diag[i] = total
    return rows, diag


def spin_obstruction(Z, data: Optional[ChainComplexData] = None) -> WuReport:
    """w2 = 0 test for closed orientable complexes of dimension <= 4.

    Dimensions 2 and 3 are forced (orientable surfaces and orientable
    3-manifolds carry spin structures).  Dimension 4 computes the mod-2
    intersection form and checks evenness; the characteristic-vector
    equation Q v = diag(Q) is solved as the degree-2 Wu class.
    Dimension >= 5 is reported Undetermined: the vanishing holds for
    every sphere-based real moment-angle manifold in this pipeline, but
    is not recomputed here.
    """
    if data is None:
        data = chain_complex_of(Z, "Z2")
    n = data.top_dim
    if n == 2:
        even = data.euler_characteristic() % 2 == 0
        return WuReport(even, "Euler characteristic parity", 2)
    if n == 3:
        return WuReport(True, "dimension-forced: closed orientable 3-manifolds are spin", 3)
    if n >= 5:
        return WuReport(None, "not computed in dimension >= 5; expected to vanish for "
                              "sphere-based moment-angle manifolds", n)
    if n != 4:
        raise ValidationError("spin obstruction defined for dimensions 2, 3, 4")
    rows, diag = intersection_form(data)
    b2 = len(rows)
    if gf2.rank_of_rows(rows) != b2:
        raise ValidationError("intersection form is degenerate; not a closed manifold?")
    diag_bits = gf2.vector_from_indices(i for i, d in enumerate(diag) if d)
    wu = gf2.solve_rows(rows, diag_bits)
    if wu is None:
        raise ValidationError("characteristic-vector equation unsolvable")
    vanishes = diag_bits == 0
    provenance = "even intersection form" if vanishes else "odd intersection form"
    return WuReport(vanishes, provenance, 4, b2=b2, diagonal=tuple(diag), wu_class_coords=wu)


# ---------------------------------------------------------------------------
# spin structures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpinStructureSet:
    spinnable: bool
    structure_count: Optional[int]
    b1_mod2: Optional[int]
    note: str = "structures form an affine space over H^1(M; Z/2)"


def spin_structures(Z, data: Optional[ChainComplexData] = None,
                    orient: Optional[OrientabilityResult] = None,
                    wu: Optional[WuReport] = None) -> SpinStructureSet:
    """Count spin structures: 2^(dim H^1(M; Z/2)) once w1 = w2 = 0."""
    if orient is None:
        orient = orientability(Z)
    if not orient.orientable:
        raise CertificateError("spin structures requested on a non-orientable complex")
    if wu is None:
        wu = spin_obstruction(Z, data)
    if wu.vanishes is not True:
        raise CertificateError("spin structures requested without a vanished obstruction")
    if data is None or data.coeff != "Z2":
        data = chain_complex_of(Z, "Z2")
    b1 = homology(data).betti[1] if data.top_dim >= 1 else 0
    return SpinStructureSet(True, 1 << b1, b1)


# ---------------------------------------------------------------------------
# cusp certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SummandCertificate:
    ok: bool
    matrix: Tuple[Tuple[int, ...], ...]
    invariant_factors: Tuple[int, ...]
    torus_rank: int
    torus_torsion: Tuple[int, ...]


def summand_certificate(
    selection: SubcomplexSelection,
    expected_rank: Optional[int] = None,
    parent_basis=None,
) -> SummandCertificate:
    """Split-injection test for H_1(T; Z) -> H_1(M; Z).

    The inclusion has an integral left inverse iff the matrix of the
    free parts has full rank with all invariant factors 1; homomorphisms
    from finite groups to Z vanish, so torsion plays no role.
    """
    matrix, ha, _hx = inclusion_free_h1_matrix(selection, 1, parent_basis=parent_basis)
    if ha.torsion:
        raise ValidationError("subcomplex does not have torsion-free H_1")
    if expected_rank is not None and ha.free_rank != expected_rank:
        raise ValidationError(
            f"subcomplex H_1 has rank {ha.free_rank}, expected {expected_rank}"
        )
    snf = smith_normal_form(matrix, nrows=len(matrix), ncols=ha.free_rank)
    ok = snf.rank == ha.free_rank and all(d == 1 for d in snf.diag[: snf.rank])
    return SummandCertificate(
        ok=ok,
        matrix=tuple(tuple(r) for r in matrix),
        invariant_factors=tuple(snf.diag[: snf.rank]),
        torus_rank=ha.free_rank,
        torus_torsion=ha.torsion,
    )


@dataclass(frozen=True)
class LieCertificate:
    ok: bool
    restriction_rank: int
    target_dim: int
    matrix_rows: Tuple[int, ...]


def lie_cusp_certificate(
    selection: SubcomplexSelection,
    spinnable: Optional[bool] = None,
    parent_basis=None,
) -> LieCertificate:
    """Lie-achievability: H^1(M; Z/2) surjects onto H^1(T; Z/2).

    When the restriction is onto, every spin structure of the cusp
    torus, the Lie one included, is the restriction of one on M.
    """
    if spinnable is False:
        raise CertificateError("Lie certificate needs a spinnable ambient manifold")
    rmap = restriction_map_z2(selection, 1, parent_basis=parent_basis)
    return LieCertificate(
        ok=rmap.is_surjective(),
        restriction_rank=rmap.rank(),
        target_dim=rmap.dim_target,
        matrix_rows=rmap.rows,
    )


@dataclass(frozen=True)
class CuspType:
    cusp_id: str
    label: str
    provenance: str


def bounding_filling_certificate(
    cusp_ids: Sequence[str],
    filled_orientable: OrientabilityResult,
    filled_wu: WuReport,
) -> Tuple[CuspType, ...]:
    """All-Bounding labels backed by a spin-verified filling.

    A spin structure on the filled manifold restricts to the cusped one
    and extends over each filling solid torus, so every cusp section
    inherits the bounding structure; existence of such a structure is
    equivalent to having a spinnable filling at all.
    """
    if not filled_orientable.orientable:
        raise CertificateError("filling is not orientable; certificate unavailable")
    if filled_wu.vanishes is not True:
        raise CertificateError("filling spin obstruction not verified to vanish")
    provenance = "extends over the spin-verified filling (%s)" % filled_wu.provenance
    return tuple(CuspType(cid, BOUNDING, provenance) for cid in cusp_ids)


def dirac_label(labels: Sequence[str]) -> str:
    """Spectrum type from the cusp labels: Real if any Lie cusp,
    Discrete if all cusps bound, Unknown otherwise."""
    if any(label == LIE for label in labels):
        return REAL_SPECTRUM
    if labels and all(label == BOUNDING for label in labels):
        return DISCRETE_SPECTRUM
    return UNKNOWN_SPECTRUM


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpinReport:
    spinnable: bool
    structure_count: Optional[int]
    cusps: Tuple[CuspType, ...]
    dirac: str
    filling_summary: Optional[Dict] = None

    def to_json(self) -> str:
        payload = {
            "spinnable": self.spinnable,
            "structure_count": str(self.structure_count) if self.structure_count is not None else None,
            "cusps": [
                {"id": c.cusp_id, "label": c.label, "provenance": c.provenance}
                for c in self.cusps
            ],
            "dirac": self.dirac,
        }
        if self.filling_summary is not None:
            payload["filling"] = self.filling_summary
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))
