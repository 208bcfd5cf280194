"""Exact rational and integer linear algebra.

Everything here works over sympy rationals (Gaussian rationals and symbols are accepted as
parameters). Column indices are 0-based inside the library.
"""

import itertools
from fractions import Fraction
from functools import cached_property, reduce
from typing import Any, ClassVar, Dict, List, Literal, Optional, Sequence, Set, Tuple, Union

import sympy
from pydantic import BaseModel, ConfigDict

from .errors import InputError, LatticeBoundExhausted, LatticeError

Scalar = Any
RationalVector = Tuple[Scalar, ...]
MatrixLike = Union["ConfigMatrix", "ExtendedMatrix", sympy.MatrixBase, Sequence[Sequence[Any]]]


def to_scalar(value: Any) -> Scalar:
    """Convert user input to an exact sympy scalar.

    Accepts integers, ``Fraction``, sympy expressions, strings such as ``"3/7"`` or ``"beta"``, and
    ``[re, im]`` pairs for Gaussian rationals. Floats are rejected because slope and index formulas
    are discontinuous in their inputs.

    Raises:
        InputError: If the value cannot be represented exactly
    """
    if isinstance(value, bool):
        raise InputError(f"Boolean is not a scalar: {value!r}")
    if isinstance(value, sympy.Basic):
        return value
    if isinstance(value, int):
        return sympy.Integer(value)
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    if isinstance(value, float):
        raise InputError(f"Floating point value {value!r} is not exact; pass a 'p/q' string")
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return to_scalar(value[0]) + sympy.I * to_scalar(value[1])
    if isinstance(value, str):
        try:
            parsed = sympy.sympify(value, rational=True)
        except (sympy.SympifyError, SyntaxError, TypeError) as e:
            raise InputError(f"Cannot parse scalar {value!r}: {e}") from e
        if parsed.has(sympy.Float):
            raise InputError(f"Scalar {value!r} is not exact")
        return parsed
    raise InputError(f"Unsupported scalar {value!r}")


def rational_vector(values: Sequence[Any]) -> RationalVector:
    """Convert a sequence to a tuple of exact scalars."""
    return tuple(to_scalar(v) for v in values)


def is_negative_integer(value: Scalar) -> bool:
    """True only when ``value`` is known to be an integer below zero."""
    value = sympy.sympify(value)
    return bool(value.is_integer) and bool(value.is_negative)


def dot(u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
    return sympy.expand(sum((a * b for a, b in zip(u, v)), sympy.Integer(0)))


def primitive_integer(vector: Sequence[Scalar]) -> Tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on the same ray."""
    rationals = [sympy.Rational(x) for x in vector]
    denominator = reduce(sympy.ilcm, (r.q for r in rationals), 1)
    integers = [int(r * denominator) for r in rationals]
    divisor = reduce(sympy.igcd, (abs(i) for i in integers), 0) or 1
    return tuple(i // divisor for i in integers)


class ConfigMatrix(BaseModel):
    """Integer d x n matrix of rank d whose columns generate Z^d."""

    model_config = ConfigDict(frozen=True)

    entries: Tuple[Tuple[int, ...], ...]

    def __init__(self, entries: Optional[Sequence[Sequence[int]]] = None, **data: Any):
        if entries is None:
            entries = data.pop("entries", None)
        if entries is None or len(entries) == 0:
            raise InputError("Configuration matrix needs at least one row")
        rows = []
        for row in entries:
            converted = []
            for value in row:
                if isinstance(value, bool) or not isinstance(value, (int, sympy.Integer)):
                    if isinstance(value, str) and value.lstrip("-").isdigit():
                        value = int(value)
                    else:
                        raise InputError(
                            f"Configuration matrix entries must be integers: {value!r}"
                        )
                converted.append(int(value))
            rows.append(tuple(converted))
        widths = {len(row) for row in rows}
        if len(widths) != 1 or 0 in widths:
            raise InputError("Configuration matrix rows must be non-empty and of equal length")

        matrix = sympy.Matrix(rows)
        if matrix.rank() != len(rows):
            raise InputError(f"Configuration matrix must have full row rank {len(rows)}")
        if lattice_index(matrix) != 1:
            raise LatticeError("Columns of the configuration matrix do not generate Z^d")

        super().__init__(entries=tuple(rows), **data)

    @property
    def d(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return len(self.entries[0])

    @cached_property
    def matrix(self) -> sympy.ImmutableMatrix:
        return sympy.ImmutableMatrix(self.entries)

    @cached_property
    def columns(self) -> Tuple[RationalVector, ...]:
        return tuple(tuple(self.matrix[:, j]) for j in range(self.n))

    def is_homogeneous(self) -> bool:
        """True when (1,...,1) lies in the row span."""
        return rowspan_contains(self, (1,) * self.n)

    def __str__(self) -> str:
        return str([list(row) for row in self.entries])


class ExtendedMatrix(BaseModel):
    """A matrix derived from a configuration and a weight vector.

    ``Atilde`` is (A 0; w 1), ``Aw`` is (A; w) and ``AB`` is (A 0; w extra) where ``extra`` is the
    negative rational -1/r (or -kappa).
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    VALID_KINDS: ClassVar[Set[str]] = {"Atilde", "Aw", "AB"}

    base: ConfigMatrix
    w: Tuple[int, ...]
    kind: Literal["Atilde", "Aw", "AB"]
    extra: Optional[Any] = None

    def __init__(self, **data: Any):
        base = data.get("base")
        kind = data.get("kind")
        if kind not in self.VALID_KINDS:
            raise InputError(f"Invalid extended matrix kind: {kind}")
        w = tuple(int(x) for x in data.get("w", ()))
        if base is None or len(w) != base.n:
            raise InputError("Weight vector length must equal the number of columns")
        data["w"] = w
        if kind == "AB":
            extra = to_scalar(data.get("extra"))
            if not (extra.is_rational and extra < 0):
                raise InputError("The last entry of a Borel matrix must be a negative rational")
            data["extra"] = extra
        else:
            data["extra"] = None
        super().__init__(**data)

    @property
    def d(self) -> int:
        return self.base.d + 1

    @property
    def n(self) -> int:
        return self.base.n if self.kind == "Aw" else self.base.n + 1

    @cached_property
    def matrix(self) -> sympy.ImmutableMatrix:
        a = sympy.Matrix(self.base.matrix)
        last = sympy.Matrix([list(self.w)])
        if self.kind == "Aw":
            return sympy.ImmutableMatrix(a.col_join(last))
        corner = sympy.Integer(1) if self.kind == "Atilde" else self.extra
        top = a.row_join(sympy.zeros(self.base.d, 1))
        bottom = last.row_join(sympy.Matrix([[corner]]))
        return sympy.ImmutableMatrix(top.col_join(bottom))

    @cached_property
    def columns(self) -> Tuple[RationalVector, ...]:
        return tuple(tuple(self.matrix[:, j]) for j in range(self.n))

    def last_row_scale(self) -> int:
        """Smallest positive integer making the last row integral."""
        return int(reduce(sympy.ilcm, (sympy.Rational(x).q for x in self.matrix.row(-1)), 1))

    def normalized_matrix(self) -> sympy.ImmutableMatrix:
        """Integer matrix with the same column lattice structure (last row scaled)."""
        scale = self.last_row_scale()
        m = sympy.Matrix(self.matrix)
        m[m.rows - 1, :] = m.row(-1) * scale
        return sympy.ImmutableMatrix(m)


def as_matrix(m: MatrixLike) -> sympy.ImmutableMatrix:
    """Return the rational matrix behind any matrix-like input."""
    if isinstance(m, (ConfigMatrix, ExtendedMatrix)):
        return m.matrix
    if isinstance(m, sympy.MatrixBase):
        return sympy.ImmutableMatrix(m)
    return sympy.ImmutableMatrix([[to_scalar(x) for x in row] for row in m])


def matrix_columns(m: MatrixLike) -> Tuple[RationalVector, ...]:
    if isinstance(m, (ConfigMatrix, ExtendedMatrix)):
        return m.columns
    mat = as_matrix(m)
    return tuple(tuple(mat[:, j]) for j in range(mat.cols))


class Simplex(BaseModel):
    """A set of d linearly independent columns with its cached inverse.

    ``volume`` is the normalized volume, |det| divided by the covolume of the column lattice.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    indices: Tuple[int, ...]
    determinant: Any
    inverse: sympy.ImmutableMatrix
    volume: int

    @classmethod
    def of(cls, m: MatrixLike, indices: Sequence[int]) -> "Simplex":
        """Build the simplex of ``m`` on ``indices``.

        Raises:
            InputError: If the columns are not a basis
        """
        mat = as_matrix(m)
        indices = tuple(sorted(int(i) for i in indices))
        if len(indices) != mat.rows or len(set(indices)) != len(indices):
            raise InputError(f"A simplex needs {mat.rows} distinct columns, got {indices}")
        sub = mat.extract(list(range(mat.rows)), list(indices))
        det = sub.det()
        if det == 0:
            raise InputError(f"Columns {indices} are linearly dependent")
        volume = abs(det) / lattice_index(mat)
        if not volume.is_integer:
            raise LatticeError(f"Normalized volume of {indices} is not an integer: {volume}")
        return cls(
            indices=indices,
            determinant=det,
            inverse=sympy.ImmutableMatrix(sub.inv()),
            volume=int(volume),
        )

    def complement(self, n: int) -> Tuple[int, ...]:
        chosen = set(self.indices)
        return tuple(i for i in range(n) if i not in chosen)

    def coordinates(self, vector: Sequence[Scalar]) -> RationalVector:
        """Solve A_sigma x = vector."""
        return tuple(sympy.expand(x) for x in self.inverse * sympy.Matrix(list(vector)))

    def column_sum(self, vector: Sequence[Scalar]) -> Scalar:
        """|A_sigma^{-1} vector|, the coordinate sum."""
        return sympy.expand(sum(self.coordinates(vector), sympy.Integer(0)))


def rational_kernel_basis(m: MatrixLike) -> List[RationalVector]:
    """Basis of ker_Q(m), each vector scaled to a primitive integer vector."""
    mat = sympy.Matrix(as_matrix(m))
    basis = []
    for vector in mat.nullspace():
        basis.append(tuple(sympy.Integer(x) for x in primitive_integer(list(vector))))
    return basis


def simplex_kernel_matrix(m: MatrixLike, sigma: Simplex) -> Dict[int, RationalVector]:
    """Columns b_j of B_sigma keyed by the non-simplex index j.

    b_j has 1 at j, 0 at the other non-simplex positions and -A_sigma^{-1} a_j on the simplex.
    """
    columns = matrix_columns(m)
    n = len(columns)
    kernel = {}
    for j in sigma.complement(n):
        coords = sigma.coordinates(columns[j])
        b = [sympy.Integer(0)] * n
        b[j] = sympy.Integer(1)
        for position, index in enumerate(sigma.indices):
            b[index] = -coords[position]
        kernel[j] = tuple(b)
    return kernel


def rowspan_contains(m: MatrixLike, v: Sequence[Any]) -> bool:
    """True iff ``v`` is a rational combination of the rows of ``m``."""
    mat = sympy.Matrix(as_matrix(m))
    vector = sympy.Matrix([list(rational_vector(v))])
    if vector.cols != mat.cols:
        raise InputError(f"Vector length {vector.cols} does not match {mat.cols} columns")
    return mat.col_join(vector).rank() == mat.rank()


def in_image_abar(m: MatrixLike, w: Sequence[Any]) -> bool:
    """True iff some (p, q) gives p . a_i + q = w_i for every column."""
    mat = sympy.Matrix(as_matrix(m))
    abar = mat.col_join(sympy.ones(1, mat.cols))
    return rowspan_contains(abar, w)


def lattice_index(m: MatrixLike) -> Scalar:
    """Covolume of the lattice spanned by the columns (gcd of maximal minors)."""
    mat = sympy.Matrix(as_matrix(m))
    scales = []
    for i in range(mat.rows):
        scale = reduce(sympy.ilcm, (sympy.Rational(x).q for x in mat.row(i)), 1)
        mat[i, :] = mat.row(i) * scale
        scales.append(scale)
    gcd = 0
    for cols in itertools.combinations(range(mat.cols), mat.rows):
        minor = int(mat.extract(list(range(mat.rows)), list(cols)).det())
        gcd = sympy.igcd(gcd, abs(minor))
        if gcd == 1:
            break
    if gcd == 0:
        raise InputError("Matrix does not have full row rank")
    return sympy.Rational(gcd, reduce(lambda a, b: a * b, scales, 1))


def normalized_volume(m: MatrixLike, indices: Sequence[int]) -> int:
    return Simplex.of(m, indices).volume


def same_lattice_class(sigma: Simplex, difference: Sequence[Scalar]) -> bool:
    """True iff ``difference`` lies in the lattice spanned by the simplex columns."""
    return all(sympy.sympify(x).is_integer for x in sigma.coordinates(difference))


def graded_vectors(length: int, max_degree: int):
    """Non-negative integer vectors by total degree, lexicographic inside one degree."""
    for degree in range(max_degree + 1):
        if length == 0:
            if degree == 0:
                yield ()
            continue
        for cut in itertools.combinations(range(degree + length - 1), length - 1):
            parts = []
            previous = -1
            for c in cut:
                parts.append(c - previous - 1)
                previous = c
            parts.append(degree + length - 1 - previous - 1)
            yield tuple(parts)


def lattice_representatives(
    m: MatrixLike,
    sigma: Simplex,
    bound: int,
    direction_weights: Optional[Sequence[Sequence[Scalar]]] = None,
    negative_directions: Sequence[int] = (),
) -> List[Tuple[int, ...]]:
    """Representatives k of the classes A_sigmabar k modulo the simplex lattice.

    Without weights the first vector of each class in graded order is kept. With
    ``direction_weights`` (one staged weight tuple per non-simplex direction) the vector of least
    staged weight sum is kept instead. Columns listed in ``negative_directions`` take the values
    -1, -2, ... in place of 0, 1, ...

    Args:
        m: The matrix
        sigma: The simplex
        bound: Largest total degree to enumerate
        direction_weights: Optional staged weights of the non-simplex directions
        negative_directions: Non-simplex columns whose entries are negative

    Returns:
        ``sigma.volume`` vectors of length n - d

    Raises:
        LatticeBoundExhausted: If fewer classes than the volume were found
    """
    columns = matrix_columns(m)
    others = sigma.complement(len(columns))
    d = len(columns[0])
    flips = tuple(j in negative_directions for j in others)
    found: List[Tuple[Tuple[int, ...], RationalVector]] = []
    best_key: List[Any] = []

    def image(k: Tuple[int, ...]) -> RationalVector:
        total = [sympy.Integer(0)] * d
        for coefficient, j in zip(k, others):
            if coefficient:
                total = [t + coefficient * a for t, a in zip(total, columns[j])]
        return tuple(total)

    def weight_key(k: Tuple[int, ...]) -> Tuple[Scalar, ...]:
        stages = len(direction_weights[0]) if direction_weights else 0
        return tuple(
            sum((k[i] * direction_weights[i][s] for i in range(len(k))), sympy.Integer(0))
            for s in range(stages)
        )

    # a least representative never has degree >= volume, so larger degrees are redundant
    for degrees in graded_vectors(len(others), min(bound, sigma.volume - 1)):
        k = tuple(-1 - x if flip else x for x, flip in zip(degrees, flips))
        y = image(k)
        for position, (rep, rep_image) in enumerate(found):
            if same_lattice_class(sigma, [a - b for a, b in zip(y, rep_image)]):
                if direction_weights is not None:
                    key = weight_key(k)
                    if key < best_key[position]:
                        found[position] = (k, y)
                        best_key[position] = key
                break
        else:
            found.append((k, y))
            if direction_weights is not None:
                best_key.append(weight_key(k))
            if direction_weights is None and len(found) == sigma.volume:
                break

    if len(found) < sigma.volume:
        raise LatticeBoundExhausted(
            f"Found {len(found)} of {sigma.volume} lattice classes with degree bound {bound}"
        )
    return [k for k, _ in found]


def integer_kernel_vectors(m: MatrixLike, bound: int) -> List[Tuple[int, ...]]:
    """Nonzero integer kernel vectors with 1-norm at most ``bound``, one per sign pair.

    The representative of each pair has its first nonzero entry positive.
    """
    mat = as_matrix(m)
    n = mat.cols
    sigma = None
    for cols in itertools.combinations(range(n), mat.rows):
        if mat.extract(list(range(mat.rows)), list(cols)).det() != 0:
            sigma = Simplex.of(mat, cols)
            break
    if sigma is None:
        raise InputError("Matrix does not have full row rank")
    kernel = simplex_kernel_matrix(mat, sigma)
    others = sigma.complement(n)
    vectors = []
    ranges = [range(-bound, bound + 1)] * len(others)
    for free in itertools.product(*ranges):
        if not any(free) or sum(abs(x) for x in free) > bound:
            continue
        u = [sympy.Integer(0)] * n
        for coefficient, j in zip(free, others):
            u = [a + coefficient * b for a, b in zip(u, kernel[j])]
        if not all(x.is_integer for x in u):
            continue
        integers = tuple(int(x) for x in u)
        if sum(abs(x) for x in integers) > bound:
            continue
        first = next(x for x in integers if x != 0)
        if first > 0:
            vectors.append(integers)
    vectors.sort(key=lambda u: (sum(abs(x) for x in u), u))
    return vectors


def kernel_box(m: MatrixLike, bound: int) -> List[Tuple[int, ...]]:
    """All integer kernel vectors (zero included) with every entry in [-bound, bound]."""
    mat = as_matrix(m)
    n = mat.cols
    sigma = next(
        Simplex.of(mat, cols)
        for cols in itertools.combinations(range(n), mat.rows)
        if mat.extract(list(range(mat.rows)), list(cols)).det() != 0
    )
    kernel = simplex_kernel_matrix(mat, sigma)
    others = sigma.complement(n)
    vectors = []
    for free in itertools.product(range(-bound, bound + 1), repeat=len(others)):
        u = [sympy.Integer(0)] * n
        for coefficient, j in zip(free, others):
            if coefficient:
                u = [a + coefficient * b for a, b in zip(u, kernel[j])]
        if all(x.is_integer and abs(x) <= bound for x in u):
            vectors.append(tuple(int(x) for x in u))
    return vectors
