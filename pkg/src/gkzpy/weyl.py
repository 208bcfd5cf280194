"""Differential operators in the Weyl algebra and their action on truncated series.

An operator is a finite sum of normal-ordered monomials c x^a d^b (every x to the left of every
d). When an operator belongs to a modified system the last variable is t.
"""

import itertools
from typing import Any, ClassVar, Dict, List, Optional, Sequence, Tuple, Union

import sympy
from pydantic import BaseModel, ConfigDict

from .errors import InputError
from .exactla import (
    ConfigMatrix,
    ExtendedMatrix,
    MatrixLike,
    Scalar,
    as_matrix,
    integer_kernel_vectors,
    rational_vector,
    to_scalar,
)
from .logging import Logger, get_default_logger
from .series import TruncatedSeries, WindowConstraint
from .settings import get_settings

Monomial = Tuple[Tuple[int, ...], Tuple[int, ...]]

GENERATOR_KINDS = ("hypergeometric", "modified", "extended", "borel")


class WeylOperator(BaseModel):
    """Sum of terms coefficient * x^a d^b in ``nvars`` variables.

    Terms with zero coefficient are pruned on construction, so two operators are equal exactly
    when their term dictionaries are.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    nvars: int
    terms: Dict[Monomial, Any]

    def __init__(self, nvars: int, terms: Optional[Dict[Monomial, Any]] = None, **data: Any):
        if nvars < 1:
            raise InputError(f"An operator needs at least one variable, got {nvars}")
        normalized: Dict[Monomial, Scalar] = {}
        for (a, b), coeff in (terms or {}).items():
            a, b = tuple(int(x) for x in a), tuple(int(x) for x in b)
            if len(a) != nvars or len(b) != nvars:
                raise InputError(f"Monomial {(a, b)} does not have {nvars} variables")
            if any(x < 0 for x in a + b):
                raise InputError(f"Monomial {(a, b)} has a negative power")
            total = sympy.expand(normalized.get((a, b), 0) + to_scalar(coeff))
            normalized[(a, b)] = total
        normalized = {key: c for key, c in normalized.items() if c != 0}
        super().__init__(nvars=nvars, terms=normalized, **data)

    @classmethod
    def constant(cls, nvars: int, value: Any) -> "WeylOperator":
        zero = (0,) * nvars
        return cls(nvars, {(zero, zero): value})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "WeylOperator":
        """The multiplication operator x_i."""
        return cls(nvars, {(_unit(nvars, i), (0,) * nvars): 1})

    @classmethod
    def partial(cls, nvars: int, i: int) -> "WeylOperator":
        """The derivation d/dx_i."""
        return cls(nvars, {((0,) * nvars, _unit(nvars, i)): 1})

    @classmethod
    def theta(cls, nvars: int, i: int) -> "WeylOperator":
        """The Euler derivation x_i d/dx_i."""
        unit = _unit(nvars, i)
        return cls(nvars, {(unit, unit): 1})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def order(self) -> int:
        """Maximal total degree in the derivations."""
        return max((sum(b) for _, b in self.terms), default=0)

    def __add__(self, other: Any) -> "WeylOperator":
        other = self._coerce(other)
        terms = dict(self.terms)
        for key, coeff in other.terms.items():
            terms[key] = terms.get(key, 0) + coeff
        return WeylOperator(self.nvars, terms)

    def __radd__(self, other: Any) -> "WeylOperator":
        return self + other

    def __neg__(self) -> "WeylOperator":
        return WeylOperator(self.nvars, {key: -c for key, c in self.terms.items()})

    def __sub__(self, other: Any) -> "WeylOperator":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> "WeylOperator":
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> "WeylOperator":
        return multiply(self, self._coerce(other))

    def __rmul__(self, other: Any) -> "WeylOperator":
        return multiply(self._coerce(other), self)

    def __pow__(self, exponent: int) -> "WeylOperator":
        if exponent < 0:
            raise InputError("Operators can only be raised to non-negative powers")
        result = WeylOperator.constant(self.nvars, 1)
        for _ in range(exponent):
            result = multiply(result, self)
        return result

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (a, b), coeff in sorted(self.terms.items(), key=lambda item: item[0]):
            factors = [f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(a) if e]
            factors += [f"d{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(b) if e]
            parts.append("*".join([f"({coeff})"] + factors) if factors else f"({coeff})")
        return " + ".join(parts)

    def _coerce(self, other: Any) -> "WeylOperator":
        if isinstance(other, WeylOperator):
            if other.nvars != self.nvars:
                raise InputError(f"Operators in {self.nvars} and {other.nvars} variables")
            return other
        return WeylOperator.constant(self.nvars, other)


def _unit(nvars: int, i: int) -> Tuple[int, ...]:
    if not 0 <= i < nvars:
        raise InputError(f"Variable index {i} out of range for {nvars} variables")
    return tuple(1 if j == i else 0 for j in range(nvars))


def _commute(b: int, c: int) -> List[Tuple[int, Scalar]]:
    """d^b x^c = sum_k C(b, k) [c]_k x^(c - k) d^(b - k), as (k, coefficient) pairs."""
    return [(k, sympy.binomial(b, k) * sympy.ff(c, k)) for k in range(min(b, c) + 1)]


def multiply(p: WeylOperator, q: WeylOperator) -> WeylOperator:
    """Normal-ordered product p q."""
    if p.nvars != q.nvars:
        raise InputError(f"Operators in {p.nvars} and {q.nvars} variables")
    terms: Dict[Monomial, Scalar] = {}
    for (a1, b1), c1 in p.terms.items():
        for (a2, b2), c2 in q.terms.items():
            choices = [_commute(b, c) for b, c in zip(b1, a2)]
            for picks in itertools.product(*choices):
                coeff = c1 * c2
                a, b = [], []
                for i, (k, factor) in enumerate(picks):
                    coeff *= factor
                    a.append(a1[i] + a2[i] - k)
                    b.append(b1[i] + b2[i] - k)
                key = (tuple(a), tuple(b))
                terms[key] = terms.get(key, 0) + coeff
    return WeylOperator(p.nvars, terms)


def _monomial_operator(nvars: int, a: Sequence[int], b: Sequence[int], coeff: Any = 1):
    return WeylOperator(nvars, {(tuple(a), tuple(b)): coeff})


def _transform_t(p: WeylOperator, image_t: WeylOperator, image_dt: WeylOperator) -> WeylOperator:
    n = p.nvars
    result = WeylOperator(n)
    for (a, b), coeff in p.terms.items():
        rest = _monomial_operator(n, a[:-1] + (0,), b[:-1] + (0,), coeff)
        result = result + rest * image_t ** a[-1] * image_dt ** b[-1]
    return result


def fourier(p: WeylOperator) -> WeylOperator:
    """The ring map t -> -d_t, d_t -> t on the last variable."""
    n = p.nvars
    return _transform_t(p, -WeylOperator.partial(n, n - 1), WeylOperator.variable(n, n - 1))


def fourier_inverse(p: WeylOperator) -> WeylOperator:
    """The ring map t -> d_t, d_t -> -t on the last variable."""
    n = p.nvars
    return _transform_t(p, WeylOperator.partial(n, n - 1), -WeylOperator.variable(n, n - 1))


class WeightVector(BaseModel):
    """Weights u on the variables and v on the derivations, with u + v > 0."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    u: Tuple[Any, ...]
    v: Tuple[Any, ...]

    def __init__(self, u: Sequence[Any], v: Sequence[Any], **data: Any):
        u, v = rational_vector(u), rational_vector(v)
        if len(u) != len(v):
            raise InputError("Weight halves must have the same length")
        if not all((ui + vi) > 0 for ui, vi in zip(u, v)):
            raise InputError(f"Weight vector ({u}; {v}) needs u + v > 0 componentwise")
        super().__init__(u=u, v=v, **data)

    @property
    def nvars(self) -> int:
        return len(self.u)

    def weight(self, a: Sequence[int], b: Sequence[int]) -> Scalar:
        return sum((ui * x for ui, x in zip(self.u, a)), sympy.Integer(0)) + sum(
            (vi * x for vi, x in zip(self.v, b)), sympy.Integer(0)
        )

    def fourier(self) -> "WeightVector":
        """Swap the weights of t and d_t."""
        u, v = list(self.u), list(self.v)
        u[-1], v[-1] = v[-1], u[-1]
        return WeightVector(u, v)


def weight_vector_L_r(n: int, r: Any) -> WeightVector:
    """The order filtration plus r times the V-filtration along t = 0, in n + 1 variables."""
    r = to_scalar(r)
    return WeightVector([0] * n + [-r], [1] * n + [1 + r])


def ring_symbols(nvars: int) -> Tuple[Tuple[sympy.Symbol, ...], Tuple[sympy.Symbol, ...]]:
    """Commuting symbols x1..xN and xi1..xiN for the graded ring."""
    xs = sympy.symbols(f"x1:{nvars + 1}")
    xis = sympy.symbols(f"xi1:{nvars + 1}")
    return tuple(xs), tuple(xis)


def _symbol_poly(nvars: int, terms: Dict[Monomial, Scalar]) -> sympy.Poly:
    xs, xis = ring_symbols(nvars)
    expr = sympy.Integer(0)
    for (a, b), coeff in terms.items():
        expr += coeff * sympy.Mul(*(x**e for x, e in zip(xs + xis, a + b)))
    return sympy.Poly(expr, *(xs + xis))


def initial_form(p: WeylOperator, weight: WeightVector) -> sympy.Poly:
    """Terms of maximal weight with each d_i replaced by xi_i; ties are all kept."""
    if weight.nvars != p.nvars:
        raise InputError(f"Weight has {weight.nvars} variables, operator has {p.nvars}")
    if p.is_zero:
        return _symbol_poly(p.nvars, {})
    weights = {key: weight.weight(*key) for key in p.terms}
    top = max(weights.values())
    return _symbol_poly(p.nvars, {key: p.terms[key] for key, w in weights.items() if w == top})


def _swap_t(poly: sympy.Poly, image_t: Any, image_xi: Any) -> sympy.Poly:
    nvars = len(poly.gens) // 2
    t, xi_t = poly.gens[nvars - 1], poly.gens[-1]
    expr = poly.as_expr().subs({t: image_t(t, xi_t), xi_t: image_xi(t, xi_t)}, simultaneous=True)
    return sympy.Poly(expr, *poly.gens)


def fourier_symbol(poly: sympy.Poly) -> sympy.Poly:
    """Commutative image of the Fourier map: t -> -xi_t, xi_t -> t."""
    return _swap_t(poly, lambda t, xi: -xi, lambda t, xi: t)


def fourier_symbol_inverse(poly: sympy.Poly) -> sympy.Poly:
    """Commutative image of the inverse Fourier map: t -> xi_t, xi_t -> -t."""
    return _swap_t(poly, lambda t, xi: xi, lambda t, xi: -t)


def _euler_operators(m: MatrixLike, beta: Sequence[Scalar]) -> List[WeylOperator]:
    mat = as_matrix(m)
    if len(beta) != mat.rows:
        raise InputError(f"Parameter has length {len(beta)}, expected {mat.rows}")
    n = mat.cols
    operators = []
    for i in range(mat.rows):
        op = WeylOperator.constant(n, -beta[i])
        for j in range(n):
            if mat[i, j] != 0:
                op = op + WeylOperator.theta(n, j) * mat[i, j]
        operators.append(op)
    return operators


def _toric_operators(m: MatrixLike, degree_bound: int) -> List[WeylOperator]:
    n = as_matrix(m).cols
    zero = (0,) * n
    operators = []
    for u in integer_kernel_vectors(m, degree_bound):
        plus = tuple(max(x, 0) for x in u)
        minus = tuple(max(-x, 0) for x in u)
        operators.append(WeylOperator(n, {(zero, plus): 1, (zero, minus): -1}))
    return operators


def system_generators(
    kind: str,
    a: MatrixLike,
    beta: Sequence[Any],
    w: Optional[Sequence[int]] = None,
    alpha: Any = None,
    degree_bound: Optional[int] = None,
    logger: Optional[Logger] = None,
) -> List[WeylOperator]:
    """Euler operators and degree-bounded toric operators of a hypergeometric system.

    Args:
        kind: ``hypergeometric`` for H_A(beta), ``extended`` for the system of (A 0; w 1) with
            parameter (beta, alpha - 1), ``modified`` for its Fourier image in (x, t), and
            ``borel`` for the system of a Borel matrix ``a`` with parameter ``beta``
        a: The configuration matrix, or the Borel matrix for ``borel``
        beta: The parameter
        w: Weight vector, required for ``extended`` and ``modified``
        alpha: Exponent of the t-prefactor, required for ``extended`` and ``modified``
        degree_bound: Largest 1-norm of a kernel vector, defaults to the configured degree
        logger: Optional logger

    Returns:
        Euler operators first, then one binomial per kernel vector pair

    Raises:
        InputError: If the kind is unknown or a required argument is missing
    """
    logger = logger or get_default_logger("gkzpy.weyl")
    if kind not in GENERATOR_KINDS:
        raise InputError(f"Unknown system kind: {kind}")
    degree_bound = get_settings().operator_degree if degree_bound is None else degree_bound
    beta = rational_vector(beta)

    if kind in ("hypergeometric", "borel"):
        matrix, parameter = a, beta
    else:
        if w is None or alpha is None:
            raise InputError(f"The {kind} system needs both w and alpha")
        if not isinstance(a, ConfigMatrix):
            a = ConfigMatrix(as_matrix(a).tolist())
        matrix = ExtendedMatrix(base=a, w=w, kind="Atilde")
        parameter = beta + (to_scalar(alpha) - 1,)

    generators = _euler_operators(matrix, parameter) + _toric_operators(matrix, degree_bound)
    if kind == "modified":
        generators = [fourier(op) for op in generators]
    logger.debug("Built system generators", kind=kind, count=len(generators), bound=degree_bound)
    return generators


def _binomial_initial(
    plus: Sequence[int], minus: Sequence[int], weight: Sequence[Scalar], xis: Sequence[Any]
) -> sympy.Expr:
    wp = sum(x * e for x, e in zip(weight, plus))
    wm = sum(x * e for x, e in zip(weight, minus))
    mono_plus = sympy.Mul(*(xi**e for xi, e in zip(xis, plus)))
    mono_minus = sympy.Mul(*(xi**e for xi, e in zip(xis, minus)))
    if wp > wm:
        return mono_plus
    if wm > wp:
        return -mono_minus
    return mono_plus - mono_minus


class ToricContainmentReport(BaseModel):
    """Outcome of comparing initial forms of the two toric ideals generator by generator."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    holds: bool
    checked: int
    failures: Tuple[Tuple[int, ...], ...] = ()


def toric_initial_containment(
    a: ConfigMatrix,
    w: Sequence[int],
    degree_bound: Optional[int] = None,
    logger: Optional[Logger] = None,
) -> ToricContainmentReport:
    """Check that the lowest-t-degree part of each toric binomial of (A 0; w 1) lies in the
    ideal generated by the w-initial forms of the toric binomials of A.

    Both families are cut at the same 1-norm bound and membership is decided by a commutative
    Groebner basis.
    """
    logger = logger or get_default_logger("gkzpy.weyl")
    degree_bound = get_settings().operator_degree if degree_bound is None else degree_bound
    w = tuple(int(x) for x in w)
    n = a.n
    xis = sympy.symbols(f"xi1:{n + 2}")
    base = []
    for u in integer_kernel_vectors(a, degree_bound):
        plus = tuple(max(x, 0) for x in u)
        minus = tuple(max(-x, 0) for x in u)
        base.append(_binomial_initial(plus, minus, w, xis[:n]))
    basis = sympy.groebner(base, *xis[:n], order="grevlex") if base else None

    atilde = ExtendedMatrix(base=a, w=w, kind="Atilde")
    tau = (0,) * n + (-1,)
    failures = []
    checked = 0
    for u in integer_kernel_vectors(atilde, degree_bound):
        plus = tuple(max(x, 0) for x in u)
        minus = tuple(max(-x, 0) for x in u)
        initial = sympy.expand(_binomial_initial(plus, minus, tau, xis))
        checked += 1
        contained = initial == 0 if basis is None else basis.contains(initial)
        if not contained:
            failures.append(u)
            logger.warning("Initial form not in the initial ideal", kernel_vector=u)
    logger.debug("Checked toric initial forms", checked=checked, failures=len(failures))
    return ToricContainmentReport(holds=not failures, checked=checked, failures=tuple(failures))


def apply(p: WeylOperator, f: TruncatedSeries) -> TruncatedSeries:
    """Act term-wise on a truncated series.

    c x^a d^b sends the term at offset u to offset u - b + a with factor prod [base + u]_b. The
    window shrinks so that every offset left inside it only receives contributions from offsets
    inside the old window; offsets outside the new window are dropped.
    """
    if p.nvars != f.nvars:
        raise InputError(f"Operator has {p.nvars} variables, series has {f.nvars}")
    window = f.window
    if p.terms:
        window = tuple(
            WindowConstraint(
                coefficients=c.coefficients,
                bound=c.bound
                - max(
                    sum(g * (bi - ai) for g, ai, bi in zip(c.coefficients, a, b))
                    for a, b in p.terms
                ),
            )
            for c in f.window
        )
    terms: Dict[Tuple[int, ...], Scalar] = {}
    for offset, coeff in f.terms.items():
        exponent = f.exponent_of(offset)
        for (a, b), c in p.terms.items():
            factor = c * coeff
            for e, bi in zip(exponent, b):
                factor *= sympy.ff(e, bi)
            target = tuple(o - bi + ai for o, ai, bi in zip(offset, a, b))
            terms[target] = terms.get(target, 0) + factor
    result = {}
    for offset, coeff in terms.items():
        if not all(c.holds(offset) for c in window):
            continue
        coeff = sympy.cancel(coeff)
        if coeff != 0:
            result[offset] = coeff
    return TruncatedSeries(
        base=f.base,
        terms=result,
        window=window,
        has_t=f.has_t,
        solves_system=f.solves_system,
        gevrey_index=f.gevrey_index,
    )


Modulo = Union[None, str, Tuple[str, int]]


class GeneratorResidue(BaseModel):
    """What one generator leaves behind inside the certified window."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    index: int
    operator: WeylOperator
    residue: TruncatedSeries

    @property
    def is_zero(self) -> bool:
        return not self.residue.terms

    def leading(self) -> Optional[Tuple[Tuple[int, ...], Scalar]]:
        """The surviving term closest to the base exponent, if any."""
        ordered = self.residue.sorted_terms()
        return ordered[0] if ordered else None


class AnnihilationReport(BaseModel):
    """Residues of a series under each generator of a system."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    MODULO_KINDS: ClassVar[Tuple[str, ...]] = ("t", "x")

    residues: Tuple[GeneratorResidue, ...]

    def passed(self, modulo: Modulo = None) -> bool:
        """Whether every surviving term is acceptable.

        Args:
            modulo: ``None`` demands exact zero. ``"t"`` accepts terms whose t-exponent is an
                integer below the t-order of the generator, which is what solutions modulo
                convergent series leave. ``("x", j)`` accepts terms whose x_j-exponent is at
                least minus the x_j-order of the generator, which is what at-infinity series
                with non-minimal negative support leave.
        """
        return not self.failures(modulo)

    def failures(self, modulo: Modulo = None) -> List[Tuple[int, Tuple[int, ...], Scalar]]:
        """(generator index, offset, coefficient) for every unacceptable term."""
        check = _residue_check(modulo)
        bad = []
        for item in self.residues:
            for offset, coeff in item.residue.sorted_terms():
                if not check(item.operator, item.residue, offset):
                    bad.append((item.index, offset, coeff))
        return bad


def _residue_check(modulo: Modulo):
    if modulo is None:
        return lambda op, series, offset: False
    if modulo == "t":
        return _allowed_mod_t
    if isinstance(modulo, (tuple, list)) and len(modulo) == 2 and modulo[0] == "x":
        j = int(modulo[1])
        return lambda op, series, offset: _allowed_mod_x(op, series, offset, j)
    raise InputError(f"Unknown residue tolerance: {modulo!r}")


def _allowed_mod_t(op: WeylOperator, series: TruncatedSeries, offset: Tuple[int, ...]) -> bool:
    if not series.has_t:
        raise InputError("Residues modulo t need a series in t")
    order = max(a[-1] - b[-1] for a, b in op.terms)
    exponent = sympy.expand(series.base[-1] + offset[-1])
    return bool(exponent.is_integer) and int(exponent) < order


def _allowed_mod_x(op: WeylOperator, series: TruncatedSeries, offset: Tuple[int, ...], j: int):
    if not 0 <= j < series.nvars:
        raise InputError(f"Variable index {j} out of range")
    order = max(b[j] - a[j] for a, b in op.terms)
    return bool(sympy.expand(series.base[j] + offset[j] + order).is_nonnegative)


def annihilation_report(
    generators: Sequence[WeylOperator],
    f: TruncatedSeries,
    logger: Optional[Logger] = None,
) -> AnnihilationReport:
    """Apply every generator to ``f`` and keep what survives inside the shrunk windows."""
    logger = logger or get_default_logger("gkzpy.weyl")
    residues = []
    for index, op in enumerate(generators):
        residue = apply(op, f)
        item = GeneratorResidue(index=index, operator=op, residue=residue)
        if not item.is_zero:
            offset, coeff = item.leading()
            logger.info(
                "Nonzero residue",
                generator=index,
                terms=len(residue.terms),
                exponent=residue.exponent_of(offset),
                coefficient=coeff,
            )
        residues.append(item)
    return AnnihilationReport(residues=tuple(residues))
