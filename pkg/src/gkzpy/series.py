"""Gamma-series, modified series and the bookkeeping around them.

A series is stored as a base exponent plus a dictionary of integer offsets with exact
coefficients. Each series carries a certified window, a set of half-spaces on offsets inside
which every absent offset is known to have coefficient zero.
"""

import itertools
import warnings
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
import sympy
from pydantic import BaseModel, ConfigDict, Field

from .errors import (
    InputError,
    NegativeTExponent,
    NonInvertibleGamma,
    NonMinimalNegativeSupport,
    NoSlope,
)
from .exactla import (
    ConfigMatrix,
    ExtendedMatrix,
    MatrixLike,
    RationalVector,
    Scalar,
    Simplex,
    as_matrix,
    dot,
    graded_vectors,
    is_negative_integer,
    kernel_box,
    lattice_representatives,
    matrix_columns,
    rational_vector,
    simplex_kernel_matrix,
    to_scalar,
)
from .geometry import outer_facets, perturb_weight, regular_triangulation
from .logging import Logger, get_default_logger
from .settings import get_settings
from .slopes import modified_slopes_along_T


def pochhammer(c: Scalar, k: int) -> Scalar:
    """Descending product c (c - 1) ... (c - k + 1); 1 when k is 0."""
    if k < 0:
        raise InputError(f"Pochhammer length must be non-negative, got {k}")
    return sympy.expand(sympy.ff(to_scalar(c), k))


def to_mpc(value: Scalar) -> mpmath.mpc:
    """Round an exact scalar to the current mpmath precision."""
    value = sympy.sympify(value)
    if value.free_symbols:
        raise InputError(f"Cannot evaluate symbolic value {value}")
    re, im = value.as_real_imag()
    parts = []
    for part in (sympy.nsimplify(re), sympy.nsimplify(im)):
        if part.is_Rational:
            parts.append(mpmath.mpf(int(part.p)) / int(part.q))
        else:
            parts.append(mpmath.mpf(str(part.evalf(mpmath.mp.dps + 10))))
    return mpmath.mpc(parts[0], parts[1])


def as_mpc(value: Any) -> mpmath.mpc:
    """Exact input is rounded with ``to_mpc``; floats and mpmath numbers are taken as they are."""
    if isinstance(value, (mpmath.mpf, mpmath.mpc, float, complex)):
        return mpmath.mpc(value)
    return to_mpc(to_scalar(value))


class Truncation(BaseModel):
    """How far series are expanded: t-order and x-degree."""

    model_config = ConfigDict(frozen=True)

    t_order: int = Field(default_factory=lambda: get_settings().t_order, ge=0)
    x_degree: int = Field(default_factory=lambda: get_settings().x_degree, ge=0)


class Exponent(BaseModel):
    """An exponent v with A v = beta, optionally built as v^k from a simplex."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    v: RationalVector
    simplex: Optional[Tuple[int, ...]] = None
    k: Optional[Tuple[int, ...]] = None

    def __init__(self, **data):
        data["v"] = rational_vector(data["v"])
        if (data.get("simplex") is None) != (data.get("k") is None):
            raise InputError("An exponent origin needs both the simplex and k")
        super().__init__(**data)

    @property
    def nsupp(self) -> Tuple[int, ...]:
        """Indices whose coordinate is a negative integer."""
        return tuple(i for i, x in enumerate(self.v) if is_negative_integer(x))

    def beta(self, a: MatrixLike) -> RationalVector:
        return tuple(sympy.expand(x) for x in as_matrix(a) * sympy.Matrix(list(self.v)))

    def negative_directions(self) -> Tuple[int, ...]:
        if self.simplex is None:
            return ()
        others = [i for i in range(len(self.v)) if i not in self.simplex]
        return tuple(j for j, kj in zip(others, self.k) if kj < 0)


class WindowConstraint(BaseModel):
    """The half-space coefficients . offset <= bound."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coefficients: Tuple[int, ...]
    bound: Scalar

    def holds(self, offset: Sequence[int]) -> bool:
        return bool(dot(self.coefficients, offset) <= self.bound)


class TruncatedSeries(BaseModel):
    """Finitely many terms coefficient * (x, t)^(base + offset).

    When ``has_t`` is set the last coordinate is the t-exponent and ``gamma`` is its base value.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    base: RationalVector
    terms: Dict[Tuple[int, ...], Scalar]
    window: Tuple[WindowConstraint, ...] = ()
    has_t: bool = False
    exponent: Optional[Exponent] = None
    solves_system: bool = True
    gevrey_index: Optional[Scalar] = None

    @property
    def gamma(self) -> Optional[Scalar]:
        return self.base[-1] if self.has_t else None

    @property
    def nvars(self) -> int:
        return len(self.base)

    def in_window(self, offset: Sequence[int]) -> bool:
        return all(c.holds(offset) for c in self.window)

    def coefficient(self, offset: Sequence[int]) -> Scalar:
        return self.terms.get(tuple(offset), sympy.Integer(0))

    def exponent_of(self, offset: Sequence[int]) -> RationalVector:
        return tuple(sympy.expand(b + o) for b, o in zip(self.base, offset))

    def sorted_terms(self) -> List[Tuple[Tuple[int, ...], Scalar]]:
        return sorted(self.terms.items(), key=lambda item: (sum(abs(o) for o in item[0]), item[0]))

    def t_orders(self) -> List[int]:
        """Distinct t-offsets present, ascending."""
        if not self.has_t:
            return [0]
        return sorted({offset[-1] for offset in self.terms})

    def layer(self, m: int) -> "TruncatedSeries":
        """The coefficient of t^(gamma + m) as a series in x alone."""
        if not self.has_t:
            raise InputError("Series has no t variable")
        terms = {o[:-1]: c for o, c in self.terms.items() if o[-1] == m}
        window = tuple(
            WindowConstraint(
                coefficients=c.coefficients[:-1], bound=c.bound - c.coefficients[-1] * m
            )
            for c in self.window
        )
        return TruncatedSeries(base=self.base[:-1], terms=terms, window=window)

    def substitute(self, values: Dict[sympy.Symbol, Scalar]) -> "TruncatedSeries":
        """Replace symbolic parameters by exact values."""
        subs = {sym: to_scalar(val) for sym, val in values.items()}
        return self.model_copy(
            update={
                "base": tuple(sympy.expand(b.subs(subs)) for b in self.base),
                "terms": {o: sympy.cancel(c.subs(subs)) for o, c in self.terms.items()},
                "window": tuple(
                    WindowConstraint(
                        coefficients=w.coefficients, bound=sympy.sympify(w.bound).subs(subs)
                    )
                    for w in self.window
                ),
            }
        )

    def evaluate(self, x: Sequence[complex]) -> mpmath.mpc:
        """Sum the stored terms at a point (principal branches) at the current mpmath precision."""
        point = [as_mpc(value) for value in x]
        if len(point) != self.nvars:
            raise InputError(f"Expected {self.nvars} coordinates, got {len(point)}")
        total = mpmath.mpc(0)
        for offset, coeff in self.terms.items():
            term = to_mpc(coeff)
            for xi, e in zip(point, self.exponent_of(offset)):
                term *= mpmath.power(xi, to_mpc(e))
            total += term
        return total

    def evaluate_layer(self, m: int, x: Sequence[complex]) -> mpmath.mpc:
        return self.layer(m).evaluate(x)


def _coefficient(v: RationalVector, u: Sequence[int]) -> Scalar:
    numerator = sympy.Integer(1)
    denominator = sympy.Integer(1)
    for vi, ui in zip(v, u):
        if ui < 0:
            numerator *= sympy.ff(vi, -ui)
        elif ui > 0:
            denominator *= sympy.ff(vi + ui, ui)
    return sympy.cancel(numerator / denominator)


def _nsupp(values: Iterable[Scalar]) -> Tuple[int, ...]:
    return tuple(i for i, x in enumerate(values) if is_negative_integer(x))


def negative_support_is_minimal(a: MatrixLike, v: Exponent, bound: int) -> bool:
    """False if some kernel vector in the box shrinks nsupp(v) to a proper subset.

    Symbolic exponents are treated as very generic and pass.
    """
    support = set(v.nsupp)
    if not support or any(sympy.sympify(x).free_symbols for x in v.v):
        return True
    for u in kernel_box(a, bound):
        shifted = set(_nsupp(x + ui for x, ui in zip(v.v, u)))
        if shifted < support:
            return False
    return True


def infer_origin(a: MatrixLike, v: Exponent) -> Exponent:
    """Attach a simplex origin to ``v``: a basis whose complement holds non-negative integers."""
    if v.simplex is not None:
        return v
    columns = matrix_columns(a)
    n, d = len(columns), len(columns[0])
    mat = as_matrix(a)
    for indices in itertools.combinations(range(n), d):
        if mat.extract(list(range(d)), list(indices)).det() == 0:
            continue
        others = [i for i in range(n) if i not in indices]
        values = [sympy.sympify(v.v[i]) for i in others]
        if all(x.is_integer and x >= 0 for x in values):
            return Exponent(v=v.v, simplex=indices, k=tuple(int(x) for x in values))
    raise InputError(f"No simplex makes {v.v} an exponent of the form v^k")


def phi_v(
    a: MatrixLike,
    v: Exponent,
    degree: Optional[int] = None,
    has_t: bool = False,
    check_bound: Optional[int] = 3,
    logger: Optional[Logger] = None,
) -> TruncatedSeries:
    """Truncation of the Gamma-series with exponent v.

    With a simplex origin the support is walked along the simplex kernel cone, otherwise the
    integer kernel is scanned in the box [-degree, degree]^n. Terms keep nsupp(v + u) = nsupp(v)
    and carry the coefficient [v]_{u-} / [v + u]_{u+}.

    Args:
        a: The matrix
        v: The exponent
        degree: Cone degree, or box radius without an origin
        has_t: Whether the last column is the t variable
        check_bound: Box radius for the minimality test of nsupp(v), None to skip the test
        logger: Optional logger

    Returns:
        The truncated series; ``solves_system`` is False when nsupp(v) is not minimal
    """
    logger = logger or get_default_logger("gkzpy.series")
    settings = get_settings()
    degree = settings.x_degree if degree is None else degree
    columns = matrix_columns(a)
    n = len(columns)
    if len(v.v) != n:
        raise InputError(f"Exponent has length {len(v.v)}, expected {n}")
    support = v.nsupp
    terms: Dict[Tuple[int, ...], Scalar] = {}

    if v.simplex is not None:
        sigma = Simplex.of(a, v.simplex)
        others = sigma.complement(n)
        kernel = simplex_kernel_matrix(a, sigma)
        signs = [1 if kj >= 0 else -1 for kj in v.k]
        for m in graded_vectors(len(others), degree):
            u = [sympy.Integer(0)] * n
            for mi, kj, sign, j in zip(m, v.k, signs, others):
                target = mi if sign > 0 else -1 - mi
                if target != kj:
                    u = [x + (target - kj) * b for x, b in zip(u, kernel[j])]
            if not all(x.is_integer for x in u):
                continue
            offset = tuple(int(x) for x in u)
            if _nsupp(x + o for x, o in zip(v.v, offset)) != support:
                continue
            terms[offset] = _coefficient(v.v, offset)
        g = [0] * n
        for sign, j in zip(signs, others):
            g[j] = sign
        bound = degree - sum(kj for kj in v.k if kj >= 0) + sum(1 + kj for kj in v.k if kj < 0)
        window = (WindowConstraint(coefficients=tuple(g), bound=sympy.Integer(bound)),)
    else:
        for offset in kernel_box(a, degree):
            if _nsupp(x + o for x, o in zip(v.v, offset)) != support:
                continue
            terms[offset] = _coefficient(v.v, offset)
        window = tuple(
            WindowConstraint(
                coefficients=tuple(sign if i == j else 0 for i in range(n)),
                bound=sympy.Integer(degree),
            )
            for j in range(n)
            for sign in (1, -1)
        )

    minimal = check_bound is None or negative_support_is_minimal(a, v, check_bound)
    if not minimal:
        message = f"Negative support {support} of {v.v} is not minimal"
        warnings.warn(message, NonMinimalNegativeSupport, stacklevel=2)
        logger.warning("Series does not solve the system", v=v.v, nsupp=support)

    logger.debug("Built Gamma-series", v=v.v, terms=len(terms), degree=degree)
    return TruncatedSeries(
        base=v.v,
        terms=terms,
        window=window,
        has_t=has_t,
        exponent=v,
        solves_system=minimal,
    )


def exponents_for_weight(
    a: MatrixLike,
    beta: Sequence[Scalar],
    w: Sequence[Scalar],
    bound: Optional[int] = None,
    logger: Optional[Logger] = None,
) -> List[Exponent]:
    """Exponents v^k for every simplex of the perturbed w-triangulation.

    For each simplex the representative k of each lattice class is the one of least perturbed
    weight, so that x^v^k is the starting monomial of its series.
    """
    logger = logger or get_default_logger("gkzpy.series")
    bound = get_settings().lattice_bound if bound is None else bound
    beta = rational_vector(beta)
    weight = perturb_weight(a, w)
    triangulation = regular_triangulation(a, weight, logger=logger)
    columns = matrix_columns(a)
    n = len(columns)
    exponents = []
    for sigma in triangulation.simplices:
        kernel = simplex_kernel_matrix(a, sigma)
        others = sigma.complement(n)
        direction_weights = [weight.pairing(kernel[j]) for j in others]
        for k in lattice_representatives(a, sigma, bound, direction_weights=direction_weights):
            exponents.append(_exponent_from(columns, sigma, beta, k))
    logger.debug("Enumerated exponents", w=w, count=len(exponents))
    return exponents


def _exponent_from(
    columns: Sequence[RationalVector], sigma: Simplex, beta: RationalVector, k: Sequence[int]
) -> Exponent:
    n = len(columns)
    others = sigma.complement(n)
    rhs = list(beta)
    for kj, j in zip(k, others):
        rhs = [r - kj * c for r, c in zip(rhs, columns[j])]
    coords = sigma.coordinates(rhs)
    v = [sympy.Integer(0)] * n
    for position, index in enumerate(sigma.indices):
        v[index] = coords[position]
    for kj, j in zip(k, others):
        v[j] = sympy.Integer(kj)
    return Exponent(v=tuple(v), simplex=sigma.indices, k=tuple(k))


class GevreyIndex(BaseModel):
    """A Gevrey index with the coordinate hyperplanes along which it is attained."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    index: Scalar
    variety: Tuple[int, ...]


def gevrey_index_coordinate(a: MatrixLike, sigma: Simplex) -> GevreyIndex:
    """s = max_j |A_sigma^{-1} a_j| and the hyperplanes x_j = 0 where it exceeds 1."""
    sums = [sigma.column_sum(col) for col in matrix_columns(a)]
    return GevreyIndex(
        index=max(sums),
        variety=tuple(j for j, value in enumerate(sums) if value > 1),
    )


def _direction_data(a: MatrixLike, w: Sequence[Scalar], sigma: Simplex):
    columns = matrix_columns(a)
    kernel = simplex_kernel_matrix(a, sigma)
    w = rational_vector(w)
    data = []
    for j in sigma.complement(len(columns)):
        size = 1 - sigma.column_sum(columns[j])
        data.append((j, size, dot(w, kernel[j])))
    return data


def gevrey_index_T(a: MatrixLike, w: Sequence[Scalar], sigma: Simplex) -> Scalar:
    """r with Gevrey index r + 1 along t = 0: the largest -|b_i| / (w . b_i) over w . b_i > 0.

    A series that converges along t = 0 gives 0.
    """
    candidates = [
        -size / pairing for _, size, pairing in _direction_data(a, w, sigma) if pairing > 0
    ]
    if not candidates:
        return sympy.Integer(0)
    return max(max(candidates), sympy.Integer(0))


def gevrey_index_T_per_direction(
    a: MatrixLike, w: Sequence[Scalar], sigma: Simplex
) -> List[Scalar]:
    """-|b_i| / (w . b_i) for each direction with w . b_i != 0."""
    return [-size / pairing for _, size, pairing in _direction_data(a, w, sigma) if pairing != 0]


def psi_v(
    a: ConfigMatrix,
    w: Sequence[int],
    alpha: Scalar,
    v: Exponent,
    trunc: Optional[Truncation] = None,
    logger: Optional[Logger] = None,
) -> TruncatedSeries:
    """The modified series t^-alpha phi_v(t^w x) grouped by powers t^(gamma + m).

    Directions with positive w-pairing are cut by the t-order, directions with zero pairing by
    the x-degree. gamma = w . v - alpha.

    Raises:
        NegativeTExponent: If some support vector lowers the power of t
    """
    logger = logger or get_default_logger("gkzpy.series")
    trunc = trunc or Truncation()
    alpha = to_scalar(alpha)
    w = tuple(int(x) for x in w)
    v = infer_origin(a, v)
    if any(kj < 0 for kj in v.k):
        raise InputError("Modified series need an exponent with k >= 0")
    n = a.n
    sigma = Simplex.of(a, v.simplex)
    others = sigma.complement(n)
    kernel = simplex_kernel_matrix(a, sigma)
    pairings = [dot(w, kernel[j]) for j in others]
    if any(p < 0 for p in pairings):
        raise NegativeTExponent(f"Exponent {v.v} is not an exponent for w={w}")

    positive = [i for i, p in enumerate(pairings) if p > 0]
    zero = [i for i, p in enumerate(pairings) if p == 0]
    room = trunc.t_order + sum(v.k[i] * pairings[i] for i in positive)
    ranges = [range(int(sympy.floor(room / pairings[i])) + 1) for i in positive]
    support = v.nsupp
    gamma = sympy.expand(dot(w, v.v) - alpha)
    terms: Dict[Tuple[int, ...], Scalar] = {}
    for zero_part in graded_vectors(len(zero), trunc.x_degree):
        for positive_part in itertools.product(*ranges):
            m = [0] * len(others)
            for i, value in zip(zero, zero_part):
                m[i] = value
            for i, value in zip(positive, positive_part):
                m[i] = value
            u = [sympy.Integer(0)] * n
            for mi, kj, j in zip(m, v.k, others):
                if mi != kj:
                    u = [x + (mi - kj) * b for x, b in zip(u, kernel[j])]
            if not all(x.is_integer for x in u):
                continue
            offset = tuple(int(x) for x in u)
            t_offset = int(dot(w, offset))
            if t_offset > trunc.t_order:
                continue
            if _nsupp(x + o for x, o in zip(v.v, offset)) != support:
                continue
            if t_offset < 0:
                raise NegativeTExponent(
                    f"Support vector {offset} of {v.v} has negative t-degree {t_offset}"
                )
            terms[offset + (t_offset,)] = _coefficient(v.v, offset)

    zero_g = [0] * (n + 1)
    for i in zero:
        zero_g[others[i]] = 1
    window = (
        WindowConstraint(
            coefficients=tuple([0] * n + [1]), bound=sympy.Integer(trunc.t_order)
        ),
        WindowConstraint(
            coefficients=tuple(zero_g),
            bound=sympy.Integer(trunc.x_degree - sum(v.k[i] for i in zero)),
        ),
    )
    r = gevrey_index_T(a, w, sigma)
    logger.debug("Built modified series", v=v.v, gamma=gamma, terms=len(terms), r=r)
    return TruncatedSeries(
        base=tuple(v.v) + (gamma,),
        terms=terms,
        window=window,
        has_t=True,
        exponent=v,
        gevrey_index=r + 1,
    )


def count_formal_solutions(a: MatrixLike, w: Sequence[Scalar]) -> int:
    """Sum of simplex volumes of the perturbed w-triangulation."""
    return regular_triangulation(a, perturb_weight(a, w)).total_volume


def indicial_roots(
    a: MatrixLike, w: Sequence[Scalar], beta: Sequence[Scalar], bound: Optional[int] = None
) -> List[Scalar]:
    """Roots w . v of the indicial polynomial, one per exponent."""
    w_vec = rational_vector(w)
    return [dot(w_vec, e.v) for e in exponents_for_weight(a, beta, w, bound=bound)]


def exponents_at_infinity(
    a: MatrixLike,
    beta: Sequence[Scalar],
    sigma: Simplex,
    j: int,
    count: Optional[int] = None,
    logger: Optional[Logger] = None,
) -> List[Exponent]:
    """Exponents v^k with k_j < 0 for the series along x_j = infinity.

    The simplex must lie in a facet witnessing a slope at infinity. The k_j closest to zero are
    chosen first.

    Raises:
        InputError: If the simplex does not lie in a witnessing facet
    """
    logger = logger or get_default_logger("gkzpy.series")
    if j in sigma.indices:
        raise InputError(f"Column {j} belongs to the simplex")
    columns = matrix_columns(a)
    others = [i for i in range(len(columns)) if i != j]
    witnessing = [
        {others[i] for i in face.indices}
        for face in outer_facets([columns[i] for i in others], logger=logger)
        if 2 - dot(face.covector, columns[j]) > 1
    ]
    if not any(set(sigma.indices) <= facet for facet in witnessing):
        raise InputError(f"Simplex {sigma.indices} lies in no facet with a slope at infinity")
    beta = rational_vector(beta)
    ks = lattice_representatives(
        a, sigma, get_settings().lattice_bound, negative_directions=(j,)
    )
    exponents = [_exponent_from(columns, sigma, beta, k) for k in ks]
    if count is not None:
        exponents = exponents[:count]
    logger.debug("Enumerated exponents at infinity", column=j, count=len(exponents))
    return exponents


def upsilon(series: TruncatedSeries, gamma: Optional[Scalar] = None) -> TruncatedSeries:
    """Send f_m t^(gamma + m) to f_m [-gamma - 1]_m t^(-1 - gamma - m).

    Raises:
        NonInvertibleGamma: If gamma is a negative integer
    """
    if not series.has_t:
        raise InputError("Series has no t variable")
    gamma = series.gamma if gamma is None else to_scalar(gamma)
    if is_negative_integer(gamma):
        raise NonInvertibleGamma(f"gamma={gamma} is a negative integer")
    shift = sympy.expand(series.gamma - gamma)
    if not (shift.is_integer and shift >= 0):
        raise InputError(f"Series t-exponents are not of the form {gamma} + m")
    terms = {}
    for offset, coeff in series.terms.items():
        m = int(shift) + offset[-1]
        terms[offset[:-1] + (-m,)] = sympy.cancel(coeff * sympy.ff(-gamma - 1, m))
    window = tuple(
        WindowConstraint(
            coefficients=c.coefficients[:-1] + (-c.coefficients[-1],),
            bound=c.bound + c.coefficients[-1] * int(shift),
        )
        for c in series.window
    )
    return series.model_copy(
        update={"base": series.base[:-1] + (-1 - gamma,), "terms": terms, "window": window}
    )


def upsilon_inverse(series: TruncatedSeries, gamma: Scalar) -> TruncatedSeries:
    """Send f_m t^(-1 - gamma - m) to f_m / [-gamma - 1]_m t^(gamma + m).

    Raises:
        NonInvertibleGamma: If gamma is a negative integer
    """
    if not series.has_t:
        raise InputError("Series has no t variable")
    gamma = to_scalar(gamma)
    if is_negative_integer(gamma):
        raise NonInvertibleGamma(f"gamma={gamma} is a negative integer")
    shift = sympy.expand(-1 - gamma - series.gamma)
    if not (shift.is_integer and shift >= 0):
        raise InputError(f"Series t-exponents are not of the form -1 - {gamma} - m")
    terms = {}
    for offset, coeff in series.terms.items():
        m = int(shift) - offset[-1]
        if m < 0:
            raise InputError(f"t-exponent of offset {offset} lies outside the map's domain")
        terms[offset[:-1] + (m,)] = sympy.cancel(coeff / sympy.ff(-gamma - 1, m))
    window = tuple(
        WindowConstraint(
            coefficients=c.coefficients[:-1] + (-c.coefficients[-1],),
            bound=c.bound - c.coefficients[-1] * int(shift),
        )
        for c in series.window
    )
    return series.model_copy(
        update={"base": series.base[:-1] + (gamma,), "terms": terms, "window": window}
    )


class ModConvergentSolutions(BaseModel):
    """Series solving the modified system modulo convergent series."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    series: Tuple[TruncatedSeries, ...]
    slopes: Tuple[Scalar, ...]
    count: int


def modified_solutions_mod_convergent(
    a: ConfigMatrix,
    w: Sequence[int],
    alpha: Scalar,
    beta: Sequence[Scalar],
    trunc: Optional[Truncation] = None,
    strict: bool = False,
    logger: Optional[Logger] = None,
) -> ModConvergentSolutions:
    """Gevrey series along t = 0 built from the at-infinity series of (A 0; w 1).

    For every witnessing facet and every simplex of its triangulation, the exponents
    (v, -1 - k) with k in N give series at t = infinity which the map for gamma = 0 carries back
    to t = 0.

    Without a slope along t = 0 the result is empty.

    Raises:
        NoSlope: If ``strict`` is set and there is no slope along t = 0
    """
    logger = logger or get_default_logger("gkzpy.series")
    trunc = trunc or Truncation()
    w = tuple(int(x) for x in w)
    report = modified_slopes_along_T(a, w, logger=logger)
    if not report.witnesses:
        if strict:
            raise NoSlope(f"No slope along t = 0 for w={w}")
        logger.info("No slope along t = 0, nothing to build", w=w)
        return ModConvergentSolutions(series=(), slopes=(), count=0)
    atilde = ExtendedMatrix(base=a, w=w, kind="Atilde")
    beta_tilde = rational_vector(beta) + (to_scalar(alpha) - 1,)
    t_column = a.n
    solutions = []
    for witness in report.witnesses:
        sub = atilde.matrix.extract(list(range(atilde.d)), list(witness.facet))
        cells = regular_triangulation(sub, perturb_weight(sub, [0] * sub.cols), logger=logger)
        for cell in cells.simplices:
            sigma = Simplex.of(atilde, tuple(witness.facet[i] for i in cell.indices))
            exponents = exponents_at_infinity(atilde, beta_tilde, sigma, t_column, logger=logger)
            for exponent in exponents:
                # only a solution modulo convergent series, so minimality is not tested
                phi = phi_v(
                    atilde,
                    exponent,
                    degree=trunc.t_order,
                    has_t=True,
                    check_bound=None,
                    logger=logger,
                )
                psi = upsilon_inverse(phi, 0)
                solutions.append(
                    psi.model_copy(update={"gevrey_index": witness.slope, "solves_system": False})
                )
    logger.debug("Built solutions modulo convergent series", w=w, count=len(solutions))
    return ModConvergentSolutions(
        series=tuple(solutions), slopes=tuple(report.slopes), count=len(solutions)
    )


def sigma_weight_vector(a: MatrixLike, sigma: Simplex) -> Tuple[int, ...]:
    """w_i = |det A_sigma| (|A_sigma^{-1} a_i| - 1) where that is positive, else 0."""
    det = abs(sigma.determinant)
    w = []
    for col in matrix_columns(a):
        size = sigma.column_sum(col)
        w.append(int(det * (size - 1)) if size > 1 else 0)
    return tuple(w)


def is_resonance_free(a: MatrixLike, beta: Sequence[Scalar], bound: int) -> bool:
    """True iff no basis coordinate of beta - A_sigmabar m is a negative integer.

    Checks every m with |m| <= bound.
    """
    beta = rational_vector(beta)
    columns = matrix_columns(a)
    n, d = len(columns), len(columns[0])
    mat = as_matrix(a)
    for indices in itertools.combinations(range(n), d):
        if mat.extract(list(range(d)), list(indices)).det() == 0:
            continue
        sigma = Simplex.of(a, indices)
        others = sigma.complement(n)
        for m in graded_vectors(len(others), bound):
            rhs = list(beta)
            for mi, j in zip(m, others):
                rhs = [r - mi * c for r, c in zip(rhs, columns[j])]
            if any(is_negative_integer(x) for x in sigma.coordinates(rhs)):
                return False
    return True


def generic_parameter_sampler(
    a: MatrixLike,
    degree_bound: int,
    seed: int,
    max_attempts: int = 100,
    logger: Optional[Logger] = None,
) -> RationalVector:
    """Deterministic rational beta with large prime denominators that passes the resonance scan.

    Raises:
        InputError: If no sample passed within ``max_attempts``
    """
    logger = logger or get_default_logger("gkzpy.series")
    rng = np.random.default_rng(seed)
    d = len(matrix_columns(a)[0])
    for attempt in range(max_attempts):
        beta = []
        for _ in range(d):
            prime = sympy.nextprime(int(rng.integers(10**6, 10**7)))
            numerator = int(rng.integers(-(10**6), 10**6))
            beta.append(sympy.Rational(numerator, prime))
        beta = tuple(beta)
        if is_resonance_free(a, beta, degree_bound):
            logger.debug("Sampled generic parameter", beta=beta, attempt=attempt)
            return beta
    raise InputError(f"No resonance-free parameter found in {max_attempts} attempts")
