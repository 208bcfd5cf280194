import numpy as np
import pytest
import sympy

from src.gkzpy.errors import InputError, NonMinimalNegativeSupport
from src.gkzpy.exactla import ConfigMatrix
from src.gkzpy.series import (
    Exponent,
    Truncation,
    TruncatedSeries,
    modified_solutions_mod_convergent,
    phi_v,
    psi_v,
)
from src.gkzpy.weyl import (
    AnnihilationReport,
    WeightVector,
    WeylOperator,
    annihilation_report,
    apply,
    fourier,
    fourier_inverse,
    fourier_symbol,
    fourier_symbol_inverse,
    initial_form,
    multiply,
    ring_symbols,
    system_generators,
    toric_initial_containment,
    weight_vector_L_r,
)


def x(n, i):
    return WeylOperator.variable(n, i)


def d(n, i):
    return WeylOperator.partial(n, i)


def theta(n, i):
    return WeylOperator.theta(n, i)


def random_monomial(rng, nvars):
    a = tuple(int(e) for e in rng.integers(0, 3, nvars))
    b = tuple(int(e) for e in rng.integers(0, 3, nvars))
    return WeylOperator(nvars, {(a, b): int(rng.integers(1, 5))})


def random_weight(rng, nvars):
    u = [int(e) for e in rng.integers(-3, 4, nvars)]
    v = [-ui + int(rng.integers(1, 4)) for ui in u]
    return WeightVector(u, v)


class TestWeylOperator:
    """Tests for operator arithmetic and normal ordering."""

    def test_commutator(self):
        product = d(2, 1) * x(2, 1)
        assert product == theta(2, 1) + 1
        assert d(2, 1) * x(2, 1) - x(2, 1) * d(2, 1) == WeylOperator.constant(2, 1)

    def test_theta_squared(self):
        result = multiply(theta(1, 0), theta(1, 0))
        assert result.terms == {((2,), (2,)): 1, ((1,), (1,)): 1}

    def test_degree_additivity(self):
        p = WeylOperator(2, {((1, 0), (0, 2)): 1})
        q = WeylOperator(2, {((0, 3), (1, 0)): 1})
        assert (p * q).order == p.order + q.order

    def test_associative(self):
        p, q, r = d(2, 0) ** 2, x(2, 0) * x(2, 1), theta(2, 0) - d(2, 1)
        assert (p * q) * r == p * (q * r)

    def test_zero_terms_are_pruned(self):
        p = theta(2, 0) - theta(2, 0)
        assert p.is_zero
        assert p.terms == {}
        assert str(p) == "0"

    def test_invalid_monomials(self):
        with pytest.raises(InputError):
            WeylOperator(2, {((1,), (0, 0)): 1})
        with pytest.raises(InputError):
            WeylOperator(1, {((-1,), (0,)): 1})
        with pytest.raises(InputError):
            d(2, 0) + d(3, 0)

    def test_string(self):
        assert str(theta(2, 1) * 2 - 3) == "(-3) + (2)*x2*d2"


class TestFourier:
    """Tests for the Fourier maps on t."""

    def test_images_of_generators(self):
        assert fourier(x(1, 0)) == -d(1, 0)
        assert fourier(d(1, 0)) == x(1, 0)
        assert fourier_inverse(x(1, 0)) == d(1, 0)
        assert fourier_inverse(d(1, 0)) == -x(1, 0)

    def test_euler_operator(self):
        assert fourier(theta(1, 0)) == -theta(1, 0) - 1

    def test_toric_binomial(self):
        # d1^2 d_t - d2 in (x1, x2, t)
        p = d(3, 0) ** 2 * d(3, 2) - d(3, 1)
        assert fourier(p) == x(3, 2) * d(3, 0) ** 2 - d(3, 1)

    def test_inverse(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            p = random_monomial(rng, 2) + random_monomial(rng, 2)
            assert fourier_inverse(fourier(p)) == p
            assert fourier(fourier_inverse(p)) == p


class TestInitialForms:
    """Tests for weight vectors and initial forms."""

    def test_weight_needs_positive_sum(self):
        with pytest.raises(InputError):
            WeightVector([1, -1], [0, 1])
        with pytest.raises(InputError):
            WeightVector([1], [0, 1])

    def test_order_filtration(self):
        xs, xis = ring_symbols(3)
        p = x(3, 2) * d(3, 0) ** 2 - d(3, 1)
        form = initial_form(p, WeightVector([0, 0, 0], [1, 1, 1]))
        assert form.as_expr() == xis[0] ** 2 * xs[2]

    def test_ties_are_kept(self):
        xs, xis = ring_symbols(2)
        p = d(2, 0) - d(2, 1) + x(2, 0)
        form = initial_form(p, WeightVector([0, 0], [1, 1]))
        assert form.as_expr() == xis[0] - xis[1]

    def test_monomial_in_t(self):
        xs, xis = ring_symbols(1)
        p = WeylOperator(1, {((2,), (3,)): 1, ((1,), (2,)): 5})
        assert initial_form(p, WeightVector(["-1/2"], [1])).as_expr() == xs[0] ** 2 * xis[0] ** 3

    def test_L_r(self):
        weight = weight_vector_L_r(2, 3)
        assert weight.u == (0, 0, -3)
        assert weight.v == (1, 1, 4)
        assert weight.fourier().u == (0, 0, 4)
        assert weight.fourier().v == (1, 1, -3)

    def test_symbol_maps_are_inverse(self):
        xs, xis = ring_symbols(2)
        poly = sympy.Poly(xs[1] ** 2 * xis[0] - 3 * xis[1], *(xs + xis))
        assert fourier_symbol(poly).as_expr() == xis[1] ** 2 * xis[0] - 3 * xs[1]
        assert fourier_symbol_inverse(fourier_symbol(poly)) == poly

    def test_commutes_with_fourier_on_monomials(self):
        rng = np.random.default_rng(11)
        weights = [random_weight(rng, 3) for _ in range(5)]
        for weight in weights:
            for _ in range(200):
                p = random_monomial(rng, 3)
                expected = initial_form(p, weight)
                image = initial_form(fourier(p), weight.fourier())
                assert fourier_symbol_inverse(image) == expected

    def test_commutes_with_fourier_on_sums(self):
        rng = np.random.default_rng(13)
        weights = [random_weight(rng, 3) for _ in range(5)]
        for weight in weights:
            for _ in range(50):
                p = random_monomial(rng, 3) + random_monomial(rng, 3) - random_monomial(rng, 3)
                expected = initial_form(p, weight)
                image = initial_form(fourier(p), weight.fourier())
                difference = fourier_symbol_inverse(image).as_expr() - expected.as_expr()
                assert sympy.expand(difference) == 0

    def test_modified_generators_at_L_r(self, one_row, symbols):
        beta, alpha = symbols
        extended = system_generators("extended", one_row, [beta], w=(0, 1), alpha=alpha)
        modified = system_generators("modified", one_row, [beta], w=(0, 1), alpha=alpha)
        for r in (0, 1, sympy.Rational(1, 2)):
            weight = weight_vector_L_r(2, r)
            for p, q in zip(modified, extended):
                lhs = initial_form(p, weight).as_expr()
                rhs = fourier_symbol(initial_form(q, weight.fourier())).as_expr()
                assert sympy.expand(lhs - rhs) == 0


class TestSystemGenerators:
    """Tests for Euler and toric generators of the systems."""

    def test_hypergeometric(self, one_row, symbols):
        beta, _ = symbols
        gens = system_generators("hypergeometric", one_row, [beta], degree_bound=3)
        assert gens == [theta(2, 0) + theta(2, 1) * 2 - beta, d(2, 0) ** 2 - d(2, 1)]

    def test_modified(self, one_row, symbols):
        beta, alpha = symbols
        gens = system_generators("modified", one_row, [beta], w=(-1, -1), alpha=alpha)
        assert gens == [
            theta(3, 0) + theta(3, 1) * 2 - beta,
            -theta(3, 0) - theta(3, 1) - theta(3, 2) - alpha,
            x(3, 2) * d(3, 0) ** 2 - d(3, 1),
        ]

    def test_extended_is_fourier_preimage(self, one_row, symbols):
        beta, alpha = symbols
        extended = system_generators("extended", one_row, [beta], w=(-1, -1), alpha=alpha)
        modified = system_generators("modified", one_row, [beta], w=(-1, -1), alpha=alpha)
        assert [fourier(p) for p in extended] == modified
        assert [fourier_inverse(p) for p in modified] == extended

    def test_modified_one_three_five(self, one_three_five, symbols):
        beta, alpha = symbols
        gens = system_generators(
            "modified", one_three_five, [beta], w=(0, 1, 1), alpha=alpha, degree_bound=7
        )
        assert x(4, 3) * d(4, 0) ** 3 - d(4, 1) in gens
        assert x(4, 3) * d(4, 0) ** 5 - d(4, 2) in gens

    def test_borel(self):
        ab = [[1, 2, 0], [0, 1, -1]]
        gens = system_generators("borel", ab, [-1, 0], degree_bound=4)
        assert gens[0] == theta(3, 0) + theta(3, 1) * 2 + 1
        assert gens[1] == theta(3, 1) - theta(3, 2)
        assert d(3, 0) ** 2 - d(3, 1) * d(3, 2) in gens

    def test_missing_weight(self, one_row):
        with pytest.raises(InputError):
            system_generators("modified", one_row, [1])
        with pytest.raises(InputError):
            system_generators("other", one_row, [1])
        with pytest.raises(InputError):
            system_generators("hypergeometric", one_row, [1, 2])


class TestToricContainment:
    """Tests for the generator-level initial ideal containment."""

    def test_one_two(self, one_row):
        report = toric_initial_containment(one_row, (0, 1), degree_bound=6)
        assert report.holds
        assert report.checked == 1

    def test_one_three_five(self, one_three_five):
        report = toric_initial_containment(one_three_five, (0, 1, 1), degree_bound=7)
        assert report.holds
        assert report.failures == ()
        assert report.checked >= 3


class TestApply:
    """Tests for operators acting on truncated series."""

    def test_eigen_relation(self):
        c = sympy.Symbol("c")
        monomial = TruncatedSeries(base=(c,), terms={(0,): 1})
        assert apply(theta(1, 0) - c, monomial).terms == {}

    def test_derivative_of_rational_power(self):
        monomial = TruncatedSeries(base=(sympy.Rational(1, 2),), terms={(0,): 1})
        result = apply(d(1, 0), monomial)
        assert result.terms == {(-1,): sympy.Rational(1, 2)}

    def test_products_act_as_compositions(self):
        c = sympy.Symbol("c")
        monomial = TruncatedSeries(base=(c,), terms={(0,): 1})
        p, q = d(1, 0), x(1, 0) * d(1, 0) ** 2
        composed = apply(p * q, monomial)
        sequential = apply(p, apply(q, monomial))
        assert set(composed.terms) == set(sequential.terms)
        for offset, coeff in composed.terms.items():
            assert sympy.expand(coeff - sequential.coefficient(offset)) == 0

    def test_window_follows_operator(self, one_row, symbols):
        beta, alpha = symbols
        series = psi_v(
            one_row, (0, 1), alpha, Exponent(v=(beta, 0)), Truncation(t_order=3, x_degree=3)
        )
        raised = apply(x(3, 2) * d(3, 0) ** 2, series)
        assert raised.window[0].bound == 4
        assert len(raised.terms) == 4
        # d_2 keeps t fixed, so the top t-order of the sum moves out of the window
        mixed = apply(x(3, 2) * d(3, 0) ** 2 + d(3, 1), series)
        assert mixed.window[0].bound == 3
        assert all(offset[-1] <= 3 for offset in mixed.terms)
        assert len(mixed.terms) == 3

    def test_variable_count_mismatch(self, one_row):
        series = phi_v(one_row, Exponent(v=(0, 1)), degree=2)
        with pytest.raises(InputError):
            apply(d(3, 0), series)


class TestAnnihilation:
    """Tests for annihilation reports."""

    def test_modified_series_is_annihilated(self, one_row, symbols):
        beta, alpha = symbols
        series = psi_v(
            one_row, (0, 1), alpha, Exponent(v=(beta, 0)), Truncation(t_order=4, x_degree=4)
        )
        gens = system_generators("modified", one_row, [beta], w=(0, 1), alpha=alpha)
        report = annihilation_report(gens, series)
        assert isinstance(report, AnnihilationReport)
        assert report.passed()
        assert all(item.is_zero for item in report.residues)

    def test_gamma_series_is_annihilated(self, one_row):
        beta = sympy.Rational(1, 3)
        series = phi_v(one_row, Exponent(v=(beta, 0), simplex=(0,), k=(0,)), degree=6)
        gens = system_generators("hypergeometric", one_row, [beta], degree_bound=3)
        assert annihilation_report(gens, series).passed()

    def test_solution_modulo_convergent(self, one_row, symbols):
        beta, alpha = symbols
        solutions = modified_solutions_mod_convergent(
            one_row, (0, 1), alpha, (beta,), Truncation(t_order=3, x_degree=3)
        )
        gens = system_generators("modified", one_row, [beta], w=(0, 1), alpha=alpha)
        report = annihilation_report(gens, solutions.series[0])
        assert not report.passed()
        assert report.passed("t")
        failures = report.failures()
        assert len(failures) == 1
        index, offset, coeff = failures[0]
        assert index == 2
        assert offset == (0, -1, 0)
        assert sympy.expand(coeff + alpha) == 0

    def test_non_minimal_support_leaves_polynomial_in_inverse_x(self):
        a = ConfigMatrix([[1, 1]])
        with pytest.warns(NonMinimalNegativeSupport):
            series = phi_v(a, Exponent(v=(-1, "1/2")), degree=1)
        gens = system_generators("hypergeometric", a, ["-1/2"], degree_bound=2)
        report = annihilation_report(gens, series)
        assert report.residues[0].is_zero
        assert report.residues[1].residue.terms == {(0, -1): sympy.Rational(-1, 2)}
        assert not report.passed()
        assert report.passed(("x", 0))

    def test_zero_operator(self, one_row):
        series = phi_v(one_row, Exponent(v=(0, 1)), degree=2)
        report = annihilation_report([WeylOperator(2)], series)
        assert report.passed()

    def test_unknown_tolerance(self, one_row):
        series = phi_v(one_row, Exponent(v=(0, 1)), degree=2)
        report = annihilation_report([d(2, 0)], series)
        with pytest.raises(InputError):
            report.passed("y")

    def test_residues_are_logged(self, logger):
        series = TruncatedSeries(base=(1, 0), terms={(0, 0): 1})
        annihilation_report([d(2, 0)], series, logger=logger)
        logger.info.assert_called_once()
