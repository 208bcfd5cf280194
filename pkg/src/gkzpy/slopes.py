"""Slope detection along coordinate hyperplanes, at infinity and along t = 0 / t = infinity."""

from typing import ClassVar, List, Optional, Sequence, Set, Tuple

import sympy
from pydantic import BaseModel, ConfigDict

from .errors import GeometryError, InputError, NotPointed, RegularityMismatch
from .exactla import (
    ConfigMatrix,
    ExtendedMatrix,
    MatrixLike,
    RationalVector,
    Scalar,
    Simplex,
    dot,
    matrix_columns,
    rational_vector,
    rowspan_contains,
)
from .geometry import (
    interior_direction,
    outer_facets,
    perturb_weight,
    regular_triangulation,
    sigma_in_outer_facet,
    umbrella_positive,
)
from .logging import Logger, get_default_logger


class SlopeWitness(BaseModel):
    """A slope with the facet and covector that certify it."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    slope: Scalar
    facet: Tuple[int, ...]
    covector: RationalVector
    volume: Optional[int] = None


class SlopeReport(BaseModel):
    """Slopes found at one locus, sorted and without repeats."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    LOCI: ClassVar[Set[str]] = {"hyperplane", "infinity", "T", "Tinf"}

    locus: str
    column: Optional[int] = None
    witnesses: Tuple[SlopeWitness, ...] = ()
    multiplicity: Optional[int] = None

    def __init__(self, **data):
        if data.get("locus") not in self.LOCI:
            raise InputError(f"Invalid locus: {data.get('locus')}")
        if data["locus"] in ("hyperplane", "infinity") and data.get("column") is None:
            raise InputError(f"Locus {data['locus']} needs a column")
        super().__init__(**data)

    @property
    def slopes(self) -> List[Scalar]:
        return sorted({w.slope for w in self.witnesses})

    def locus_label(self) -> str:
        """The command-line spelling of the locus, with 1-based column labels."""
        if self.column is None:
            return self.locus
        return f"{self.locus}:{self.column + 1}"


def _column_slopes(
    a: MatrixLike, j: int, candidate, locus: str, logger: Logger
) -> SlopeReport:
    columns = matrix_columns(a)
    if not 0 <= j < len(columns):
        raise InputError(f"Column index {j} out of range")
    others = [i for i in range(len(columns)) if i != j]
    witnesses = {}
    if others and any(any(x != 0 for x in columns[i]) for i in others):
        for face in outer_facets([columns[i] for i in others], logger=logger):
            s = candidate(dot(face.covector, columns[j]))
            if s > 1:
                facet = tuple(others[i] for i in face.indices)
                witnesses.setdefault(s, SlopeWitness(slope=s, facet=facet, covector=face.covector))
    report = SlopeReport(
        locus=locus,
        column=j,
        witnesses=tuple(witnesses[s] for s in sorted(witnesses)),
    )
    logger.debug("Computed slopes", locus=report.locus_label(), slopes=report.slopes)
    return report


def slopes_along_hyperplane(
    a: MatrixLike, j: int, logger: Optional[Logger] = None
) -> SlopeReport:
    """Slopes of the hypergeometric system along x_j = 0 (0-based ``j``).

    Each facet of conv(0, a_i : i != j) away from the origin with covector c proposes
    s = c . a_j, kept when s > 1.
    """
    logger = logger or get_default_logger("gkzpy.slopes")
    return _column_slopes(a, j, lambda value: value, "hyperplane", logger)


def slopes_at_infinity(a: MatrixLike, j: int, logger: Optional[Logger] = None) -> SlopeReport:
    """Slopes along x_j = infinity: candidates s = 2 - c . a_j kept when s > 1."""
    logger = logger or get_default_logger("gkzpy.slopes")
    return _column_slopes(a, j, lambda value: 2 - value, "infinity", logger)


def is_pointed(m: MatrixLike) -> bool:
    """True iff all columns lie in an open half-space through the origin."""
    return interior_direction(matrix_columns(m)) is not None


def pyramid_volume(points: Sequence[RationalVector], indices: Sequence[int]) -> int:
    """Normalized volume of conv(0, points[i] : i in indices) in the standard lattice."""
    sub = sympy.Matrix.hstack(*[sympy.Matrix(list(points[i])) for i in indices])
    if sub.rank() < sub.rows:
        return 0
    triangulation = regular_triangulation(sub, perturb_weight(sub, [0] * sub.cols))
    return int(sum(abs(s.determinant) for s in triangulation.simplices))


def _check_weight(a: ConfigMatrix, w: Sequence[int]) -> Tuple[int, ...]:
    w = tuple(int(x) for x in w)
    if len(w) != a.n:
        raise InputError(f"Weight has length {len(w)}, expected {a.n}")
    return w


def modified_slopes_along_T(
    a: ConfigMatrix, w: Sequence[int], logger: Optional[Logger] = None, locus: str = "T"
) -> SlopeReport:
    """Slopes of the modified system along t = 0.

    A facet of conv(0, (a_i, w_i)) away from the origin with covector (c, c_t) gives r = -c_t,
    and s = r + 1 is a slope when r > 0. The multiplicity is the summed volume of the witnessing
    pyramids.

    Raises:
        NotPointed: If the extended matrix is not pointed
        RegularityMismatch: If the two answers differ
    """
    logger = logger or get_default_logger("gkzpy.slopes")
    w = _check_weight(a, w)
    atilde = ExtendedMatrix(base=a, w=w, kind="Atilde")
    if not is_pointed(atilde):
        raise NotPointed(f"The extended matrix for w={w} is not pointed")
    if rowspan_contains(a, w):
        logger.debug("Weight lies in the row span, no slopes", w=w)
        return SlopeReport(locus=locus, multiplicity=0)

    aw = ExtendedMatrix(base=a, w=w, kind="Aw")
    points = aw.columns
    witnesses = []
    for face in outer_facets(points, logger=logger):
        r = -face.covector[-1]
        if not r > 0:
            continue
        if face.covector[-1] * (-1 / r) != 1:
            raise GeometryError(f"Facet {face.indices} does not certify the slope {r + 1}")
        volume = pyramid_volume(points, face.indices)
        witnesses.append(
            SlopeWitness(slope=r + 1, facet=face.indices, covector=face.covector, volume=volume)
        )
    witnesses.sort(key=lambda wit: (wit.slope, wit.facet))
    report = SlopeReport(
        locus=locus,
        witnesses=tuple(witnesses),
        multiplicity=sum(wit.volume for wit in witnesses),
    )
    logger.debug(
        "Computed modified slopes",
        locus=locus,
        w=w,
        slopes=report.slopes,
        facets=[wit.facet for wit in witnesses],
    )
    return report


def modified_slopes_along_Tinf(
    a: ConfigMatrix, w: Sequence[int], logger: Optional[Logger] = None
) -> SlopeReport:
    """Slopes along t = infinity, computed as the t = 0 slopes of -w."""
    w = _check_weight(a, w)
    return modified_slopes_along_T(a, tuple(-x for x in w), logger=logger, locus="Tinf")


class RegularityReport(BaseModel):
    """Outcome of the regularity test along t = 0 with both face sets it compared."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    regular: bool
    faces_condition_holds: bool
    weighted_faces: Tuple[Tuple[int, ...], ...]
    unit_faces: Tuple[Tuple[int, ...], ...]
    shifted_weight: RationalVector
    slopes: Tuple[Scalar, ...]


def positive_shift(a: ConfigMatrix, w: Sequence[int]) -> RationalVector:
    """w + lambda A with all entries positive, read off a pointedness witness of (A 0; w 1).

    Raises:
        NotPointed: If no witness exists
    """
    w = _check_weight(a, w)
    atilde = ExtendedMatrix(base=a, w=w, kind="Atilde")
    h = interior_direction(atilde.columns)
    if h is None:
        raise NotPointed(f"The extended matrix for w={w} is not pointed")
    h_a, h_t = h[:-1], h[-1]
    return tuple(sympy.Integer(wi) + dot(h_a, col) / h_t for wi, col in zip(w, a.columns))


def _sub_umbrella_faces(
    a: ConfigMatrix, eta: Tuple[int, ...], weights: Sequence[Scalar], logger: Logger
) -> Set[Tuple[int, ...]]:
    columns = [a.columns[i] for i in eta]
    sub = sympy.Matrix.hstack(*[sympy.Matrix(list(c)) for c in columns])
    umbrella = umbrella_positive(sub, [weights[i] for i in eta], logger=logger)
    return {tuple(eta[i] for i in face) for face in umbrella.maximal()}


def is_regular_along_T(
    a: ConfigMatrix, w: Sequence[int], logger: Optional[Logger] = None
) -> RegularityReport:
    """Decide regularity along t = 0 in two independent ways.

    ``regular`` is the absence of modified slopes. ``faces_condition_holds`` compares the
    (d-1)-faces of the shifted-weight umbrellas of the unit-weight facets with the unit-weight
    (d-1)-faces of the shifted-weight facets. The two answers must agree.

    Raises:
        NotPointed: If the extended matrix is not pointed
        RegularityMismatch: If the two answers differ
    """
    logger = logger or get_default_logger("gkzpy.slopes")
    w = _check_weight(a, w)
    report = modified_slopes_along_T(a, w, logger=logger)
    shifted = positive_shift(a, w)
    ones = [sympy.Integer(1)] * a.n

    weighted: Set[Tuple[int, ...]] = set()
    for eta in umbrella_positive(a, ones, logger=logger).maximal():
        weighted |= _sub_umbrella_faces(a, eta, shifted, logger)
    unit: Set[Tuple[int, ...]] = set()
    for eta in umbrella_positive(a, shifted, logger=logger).maximal():
        unit |= _sub_umbrella_faces(a, eta, ones, logger)

    faces_condition = weighted == unit
    regular = not report.witnesses
    if faces_condition != regular:
        logger.error(
            "Regularity criteria disagree",
            w=w,
            slopes=report.slopes,
            weighted=sorted(weighted),
            unit=sorted(unit),
        )
        raise RegularityMismatch(
            f"For w={w} the slopes say regular={regular} but the faces say {faces_condition}"
        )
    return RegularityReport(
        regular=regular,
        faces_condition_holds=faces_condition,
        weighted_faces=tuple(sorted(weighted)),
        unit_faces=tuple(sorted(unit)),
        shifted_weight=shifted,
        slopes=tuple(report.slopes),
    )


def rowspan_shift_invariance(
    a: ConfigMatrix, w: Sequence[int], combination: Sequence[int]
) -> bool:
    """True iff adding ``combination`` times the rows of A to w leaves the slopes along T fixed."""
    w = _check_weight(a, w)
    combination = tuple(int(x) for x in combination)
    if len(combination) != a.d:
        raise InputError(f"Expected {a.d} row coefficients")
    shifted = tuple(
        wi + sum(c * a.entries[row][i] for row, c in enumerate(combination))
        for i, wi in enumerate(w)
    )
    return modified_slopes_along_T(a, w).slopes == modified_slopes_along_T(a, shifted).slopes


class SpecialWeightReport(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    formal: bool
    gevrey_index: Optional[Scalar] = None


def special_weight_series_is_formal(
    a: ConfigMatrix, sigma: Simplex, kappa: Scalar
) -> SpecialWeightReport:
    """For w = (-kappa, ..., -kappa), whether t^-alpha phi_v(t^w x) is a formal series along t = 0.

    It is exactly when the simplex lies in an outer facet; the Gevrey index is then 1 + 1/kappa.
    """
    kappa = rational_vector([kappa])[0]
    if not kappa > 0:
        raise InputError("kappa must be positive")
    if sigma_in_outer_facet(a, sigma):
        return SpecialWeightReport(formal=True, gevrey_index=1 + 1 / kappa)
    return SpecialWeightReport(formal=False)


def sigma_weight_slope(
    a: ConfigMatrix, sigma: Simplex, logger: Optional[Logger] = None
) -> Optional[Scalar]:
    """The slope 1 + 1/|det A_sigma| along t = 0 for the simplex's own weight vector.

    Returns None when the simplex lies in a facet of conv(0, A), where the weight vector vanishes.
    The value is confirmed against the modified slope detector.
    """
    # Import here to avoid circular imports
    from .series import sigma_weight_vector

    logger = logger or get_default_logger("gkzpy.slopes")
    w = sigma_weight_vector(a, sigma)
    if not any(w):
        return None
    s = 1 + sympy.Rational(1, abs(sigma.determinant))
    found = modified_slopes_along_T(a, w, logger=logger).slopes
    if s not in found:
        logger.warning("Weight slope not detected", sigma=sigma.indices, expected=s, found=found)
        return None
    return s
