"""Polyhedral machinery: hull facets, umbrellas and regular triangulations.

Facets are found by exhaustive subset testing with exact side checks, which is plenty for the
small dimensions this package targets.
"""

import itertools
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

import sympy
from pydantic import BaseModel, ConfigDict

from .errors import GeometryError, NonSimplicialCell
from .exactla import (
    MatrixLike,
    RationalVector,
    Scalar,
    Simplex,
    as_matrix,
    dot,
    matrix_columns,
    rational_vector,
)
from .logging import Logger, get_default_logger
from .settings import get_settings

ORIGIN = -1


class Face(BaseModel):
    """A face of a hull together with a supporting half-space ``covector . y <= offset``.

    Faces away from the origin are normalized to offset 1 whenever possible; faces through the
    origin have offset 0 and an outward covector.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    indices: Tuple[int, ...]
    covector: RationalVector
    offset: Scalar
    contains_zero: bool

    def value(self, point: Sequence[Scalar]) -> Scalar:
        return dot(self.covector, point)

    def labels(self) -> List[int]:
        """1-based column labels."""
        return [i + 1 for i in self.indices]


class Umbrella(BaseModel):
    """Faces of a weighted hull that avoid the origin, keyed by index set with their dimension."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    faces: Dict[Tuple[int, ...], int]
    facets: Tuple[Face, ...]
    weights: RationalVector
    dimension: int

    def of_dimension(self, k: int) -> List[Tuple[int, ...]]:
        return sorted(face for face, dim in self.faces.items() if dim == k)

    def maximal(self) -> List[Tuple[int, ...]]:
        """Index sets of the faces of dimension d - 1."""
        return self.of_dimension(self.dimension - 1)


class PerturbedWeight(BaseModel):
    """A weight compared stage by stage: w first, then the later perturbation stages.

    Stands in for w + e((1,...,1) + e' w') with e, e' infinitesimal.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    stages: Tuple[RationalVector, ...]

    @property
    def base(self) -> RationalVector:
        return self.stages[0]

    @property
    def n(self) -> int:
        return len(self.stages[0])

    def pairing(self, vector: Sequence[Scalar]) -> Tuple[Scalar, ...]:
        """Staged value of ``w . vector``."""
        return tuple(dot(stage, vector) for stage in self.stages)

    def entry(self, i: int) -> Tuple[Scalar, ...]:
        return tuple(stage[i] for stage in self.stages)


class Triangulation(BaseModel):
    """Maximal simplices of a regular triangulation with their lower-face certificates."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    simplices: Tuple[Simplex, ...]
    weight: PerturbedWeight
    certificates: Dict[Tuple[int, ...], Tuple[RationalVector, ...]]

    @property
    def total_volume(self) -> int:
        return sum(s.volume for s in self.simplices)

    def index_sets(self) -> List[Tuple[int, ...]]:
        return [s.indices for s in self.simplices]


WeightLike = Union[PerturbedWeight, Sequence[Scalar]]


def staged_sign(values: Sequence[Scalar]) -> int:
    """Sign of a staged value: the sign of its first nonzero stage."""
    for value in values:
        value = sympy.sympify(value)
        if value != 0:
            return 1 if value > 0 else -1
    return 0


def _affine_frame(points: Sequence[RationalVector]):
    """Base point, projection matrix and dimension of the affine span of ``points``."""
    base = sympy.Matrix(list(points[0]))
    differences = [sympy.Matrix(list(p)) - base for p in points[1:]]
    if not differences:
        return base, None, None, 0
    directions = sympy.Matrix.hstack(*differences).columnspace()
    if not directions:
        return base, None, None, 0
    frame = sympy.Matrix.hstack(*directions)
    projection = (frame.T * frame).inv() * frame.T
    return base, frame, projection, frame.cols


def hull_facets(
    points: Sequence[Sequence[Scalar]],
    with_origin: bool = True,
    logger: Optional[Logger] = None,
) -> List[Face]:
    """Enumerate the facets of conv(points), optionally with the origin added.

    Point sets of lower dimension are handled inside their affine span. Face indices refer to
    positions in ``points``; the origin never appears in ``indices`` and is reported through
    ``contains_zero`` instead.

    Raises:
        GeometryError: If the hull is a single point
    """
    logger = logger or get_default_logger("gkzpy.geometry")
    pts = [rational_vector(p) for p in points]
    if not pts:
        raise GeometryError("No points given")
    dim_ambient = len(pts[0])
    zero = tuple(sympy.Integer(0) for _ in range(dim_ambient))
    labelled: List[Tuple[int, RationalVector]] = list(enumerate(pts))
    if with_origin:
        labelled.append((ORIGIN, zero))
    origin_in_hull = with_origin or any(p == zero for p in pts)

    base, frame, projection, k = _affine_frame([p for _, p in labelled])
    if k == 0:
        raise GeometryError("Hull of the points is zero-dimensional")

    coords = {}
    for label, p in labelled:
        coords[label] = tuple(projection * (sympy.Matrix(list(p)) - base))
    # component of the span orthogonal to its directions; zero iff the span holds the origin
    normal = base - frame * (projection * base)
    normal_norm = (normal.T * normal)[0]

    faces: Dict[Tuple[int, ...], Face] = {}
    labels = [label for label, _ in labelled]
    for subset in itertools.combinations(labels, k):
        anchor = sympy.Matrix(list(coords[subset[0]]))
        rows = [list(sympy.Matrix(list(coords[s])) - anchor) for s in subset[1:]]
        system = sympy.Matrix(rows) if rows else sympy.zeros(0, k)
        null = system.nullspace() if rows else [sympy.eye(k)[:, 0]]
        if len(null) != 1:
            continue
        g = null[0]
        values = {
            label: (g.T * (sympy.Matrix(list(coords[label])) - anchor))[0] for label in labels
        }
        if all(v <= 0 for v in values.values()):
            sign = 1
        elif all(v >= 0 for v in values.values()):
            sign = -1
        else:
            continue
        on_face = tuple(sorted(label for label, v in values.items() if v == 0))
        if on_face in faces:
            continue

        g = g * sign
        covector = projection.T * g
        offset = (covector.T * base)[0] + (g.T * anchor)[0]
        if normal_norm != 0:
            # the origin is off the affine span, so any offset can be reached
            covector = covector + normal * ((1 - offset) / normal_norm)
            offset = sympy.Integer(1)
        elif offset != 0:
            covector = covector / abs(offset)
            offset = offset / abs(offset)
        covector_tuple = tuple(sympy.nsimplify(x) for x in covector)
        contains_zero = origin_in_hull and offset == 0
        faces[on_face] = Face(
            indices=tuple(i for i in on_face if i != ORIGIN),
            covector=covector_tuple,
            offset=sympy.sympify(offset),
            contains_zero=contains_zero or ORIGIN in on_face,
        )

    result = sorted(faces.values(), key=lambda f: (f.contains_zero, f.indices))
    logger.debug("Enumerated hull facets", points=len(pts), facets=len(result), dimension=k)
    return result


def outer_facets(points: Sequence[Sequence[Scalar]], logger: Optional[Logger] = None) -> List[Face]:
    """Facets of conv(points + origin) not containing the origin, normalized to c . y = 1."""
    return [f for f in hull_facets(points, with_origin=True, logger=logger) if not f.contains_zero]


def interior_direction(points: Sequence[Sequence[Scalar]]) -> Optional[RationalVector]:
    """An h with h . p > 0 for every point, or None when no such h exists.

    The witness is minus the sum of the outward normals of the facets through the origin.
    """
    pts = [rational_vector(p) for p in points]
    if any(all(x == 0 for x in p) for p in pts):
        return None
    facets = hull_facets(pts, with_origin=True)
    through_zero = [f for f in facets if f.contains_zero]
    if not through_zero:
        return None
    common: Set[int] = set(range(len(pts)))
    for f in through_zero:
        common &= set(f.indices)
    if common:
        return None
    h = [sympy.Integer(0)] * len(pts[0])
    for f in through_zero:
        h = [a - b for a, b in zip(h, f.covector)]
    h = tuple(sympy.nsimplify(x) for x in h)
    if not all(dot(h, p) > 0 for p in pts):
        return None
    return h


def is_vertex_origin(points: Sequence[Sequence[Scalar]]) -> bool:
    """True iff the origin is a vertex of conv(points + origin) distinct from every point."""
    return interior_direction(points) is not None


def face_dimension(points: Sequence[RationalVector], indices: Sequence[int]) -> int:
    if not indices:
        return -1
    chosen = [points[i] for i in indices]
    _, _, _, k = _affine_frame(chosen)
    return k


def _umbrella_from_points(
    points: Sequence[RationalVector], weights: RationalVector, logger: Optional[Logger]
) -> Umbrella:
    facets = hull_facets(points, with_origin=True, logger=logger)
    index_sets = [frozenset(f.indices) | ({ORIGIN} if f.contains_zero else set()) for f in facets]
    faces: Set[frozenset] = set(index_sets)
    frontier = set(faces)
    while frontier:
        discovered = set()
        for face in frontier:
            for facet in index_sets:
                meet = face & facet
                if meet not in faces:
                    discovered.add(meet)
        faces |= discovered
        frontier = discovered

    graded = {(): -1}
    for face in faces:
        if ORIGIN in face or not face:
            continue
        key = tuple(sorted(face))
        graded[key] = face_dimension(points, key)
    dimension = len(points[0])
    outer = tuple(f for f in facets if not f.contains_zero)
    return Umbrella(faces=graded, facets=outer, weights=tuple(weights), dimension=dimension)


def umbrella_positive(
    a: MatrixLike, weights: Sequence[Scalar], logger: Optional[Logger] = None
) -> Umbrella:
    """Faces not containing 0 of conv(0, a_1/v_1, ..., a_n/v_n) for positive weights v.

    Raises:
        GeometryError: If a weight is not positive
    """
    columns = matrix_columns(a)
    v = rational_vector(weights)
    if len(v) != len(columns):
        raise GeometryError("One weight per column is required")
    if any(not (x > 0) for x in v):
        raise GeometryError(f"Umbrella weights must be positive: {v}")
    points = [tuple(x / vi for x in col) for col, vi in zip(columns, v)]
    return _umbrella_from_points(points, v, logger)


def perturb_weight(
    a: MatrixLike,
    w: Sequence[Scalar],
    stage_count: int = 3,
    base: Optional[int] = None,
) -> PerturbedWeight:
    """Staged weight comparing by w, then (1,...,1), then (1, K, K^2, ...).

    Args:
        a: The matrix the weight lives on (fixes the length)
        w: The weight to perturb
        stage_count: How many of the three stages to keep
        base: The K of the last stage, defaults to the configured perturbation base
    """
    n = len(matrix_columns(a))
    w = rational_vector(w)
    if len(w) != n:
        raise GeometryError(f"Weight has length {len(w)}, expected {n}")
    if base is None:
        base = get_settings().perturbation_base
    ones = tuple(sympy.Integer(1) for _ in range(n))
    generic = tuple(sympy.Integer(base) ** i for i in range(n))
    stages = (w, ones, generic)[: max(1, min(stage_count, 3))]
    return PerturbedWeight(stages=stages)


def as_weight(a: MatrixLike, w: WeightLike) -> PerturbedWeight:
    if isinstance(w, PerturbedWeight):
        return w
    return perturb_weight(a, w, stage_count=1)


def regular_triangulation(
    a: MatrixLike, w: WeightLike, logger: Optional[Logger] = None
) -> Triangulation:
    """Regular triangulation of the columns induced by ``w``.

    A simplex is a cell when some c has c . a_i = w_i on it and c . a_j < w_j off it. Staged
    weights compare lexicographically.

    Raises:
        NonSimplicialCell: If ``w`` ties on some lower face
        GeometryError: If no lower face exists
    """
    logger = logger or get_default_logger("gkzpy.geometry")
    mat = as_matrix(a)
    weight = as_weight(a, w)
    columns = matrix_columns(a)
    n, d = len(columns), mat.rows
    simplices = []
    certificates = {}
    for indices in itertools.combinations(range(n), d):
        sub = mat.extract(list(range(d)), list(indices))
        if sub.det() == 0:
            continue
        sigma = Simplex.of(mat, indices)
        stage_covectors = []
        for stage in weight.stages:
            values = sympy.Matrix([[stage[i] for i in indices]])
            stage_covectors.append(tuple(values * sigma.inverse))
        slacks = {}
        for j in sigma.complement(n):
            slacks[j] = tuple(
                stage[j] - dot(c, columns[j]) for stage, c in zip(weight.stages, stage_covectors)
            )
        signs = {j: staged_sign(s) for j, s in slacks.items()}
        if any(sign < 0 for sign in signs.values()):
            continue
        if any(sign == 0 for sign in signs.values()):
            raise NonSimplicialCell(
                f"Weight {weight.base} is not generic on columns {indices}; perturb it first"
            )
        simplices.append(sigma)
        certificates[indices] = tuple(stage_covectors)

    if not simplices:
        raise GeometryError(f"Weight {weight.base} has no lower faces on this configuration")
    triangulation = Triangulation(
        simplices=tuple(simplices), weight=weight, certificates=certificates
    )
    logger.debug(
        "Computed regular triangulation",
        weight=weight.base,
        simplices=[s.indices for s in simplices],
        volume=triangulation.total_volume,
    )
    return triangulation


def triangulation_volume(a: MatrixLike, w: WeightLike) -> int:
    return regular_triangulation(a, w).total_volume


def eta_for_simplex(a: MatrixLike, sigma: Simplex) -> Tuple[int, ...]:
    """Indices i with |A_sigma^{-1} a_i| >= 1."""
    columns = matrix_columns(a)
    return tuple(i for i, col in enumerate(columns) if sigma.column_sum(col) >= 1)


def sigma_in_outer_facet(a: MatrixLike, sigma: Simplex) -> bool:
    """True iff |A_sigma^{-1} a_i| >= 1 for every column off the simplex."""
    columns = matrix_columns(a)
    return all(sigma.column_sum(columns[i]) >= 1 for i in sigma.complement(len(columns)))


def umbrella_inclusion_check(
    a: MatrixLike, eta: Sequence[int], logger: Optional[Logger] = None
) -> bool:
    """True iff every (d-1)-face of the unit-weight umbrella of A_eta is one of A's.

    Index sets are compared literally after mapping the sub-configuration back to column indices.
    """
    logger = logger or get_default_logger("gkzpy.geometry")
    columns = matrix_columns(a)
    eta = tuple(sorted(eta))
    ones = [1] * len(columns)
    full = set(umbrella_positive(a, ones, logger=logger).maximal())
    sub_points = [columns[i] for i in eta]
    sub = umbrella_positive(
        sympy.Matrix.hstack(*[sympy.Matrix(list(p)) for p in sub_points]),
        [1] * len(eta),
        logger=logger,
    )
    mapped = {tuple(eta[i] for i in face) for face in sub.maximal()}
    result = mapped <= full
    logger.debug("Umbrella inclusion", eta=eta, sub_facets=sorted(mapped), facets=sorted(full))
    return result
