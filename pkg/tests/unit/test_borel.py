import mpmath
import pytest
import sympy

from src.gkzpy.borel import (
    asymptotic_check,
    borel_matrix,
    borel_transform,
    borel_transform_formal,
    check_summability_hypotheses,
    formal_borel,
    laplace_sum,
    multiply_by_power,
    sample_growth,
    singular_directions_example12,
    substitute_t_power,
)
from src.gkzpy.errors import DomainViolation, GammaPole, InputError, SingularDirection
from src.gkzpy.exactla import ConfigMatrix
from src.gkzpy.ode import example12_ode
from src.gkzpy.precision_manager import DoublingPrecisionPolicy
from src.gkzpy.series import Exponent, TruncatedSeries, Truncation, psi_v
from src.gkzpy.weyl import WeylOperator, annihilation_report, apply, system_generators

T_GRID = [mpmath.mpc(0, f"1e-{k}") for k in range(1, 5)]


def by_exponent(series):
    return {series.exponent_of(offset): coeff for offset, coeff in series.terms.items()}


def closed_form_sum(t):
    """integral_0^inf exp(-s) (1 - 4 t s)^(-1/2) ds, the Borel sum of sum (2m)!/m! t^m."""

    def integrand(s):
        return mpmath.exp(-s) * (1 - 4 * t * s) ** mpmath.mpf(-0.5)

    return mpmath.quad(integrand, [0, mpmath.inf])


@pytest.fixture
def flagship_psi(one_row):
    """A = (1 2), w = (0 1), beta = -1, alpha = 0: f_m = (2m)!/m! at x = (1 1)."""
    v = Exponent(v=(-1, 0), simplex=(0,), k=(0,))
    return psi_v(one_row, (0, 1), 0, v, Truncation(t_order=16, x_degree=0))


@pytest.fixture
def one_three_five_six():
    return ConfigMatrix([[1, 3, 5, 6]])


@pytest.fixture
def psi_1356(one_three_five_six):
    v = Exponent(v=("1/3", 0, 0, 0), simplex=(0,), k=(0, 0, 0))
    return psi_v(one_three_five_six, (-4, -2, 0, 1), 0, v, Truncation(t_order=12, x_degree=0))


@pytest.fixture
def symbolic_psi(one_row, symbols):
    beta, alpha = symbols
    v = Exponent(v=(beta, 0), simplex=(0,), k=(0,))
    return psi_v(one_row, (0, 1), alpha, v, Truncation(t_order=3, x_degree=0))


@pytest.fixture
def geometric():
    """sum_{l <= 12} t^l as a series in t alone."""
    return TruncatedSeries(
        base=(sympy.Integer(0),),
        terms={(ell,): sympy.Integer(1) for ell in range(13)},
        has_t=True,
    )


class TestBorelTransform:
    """Tests for the numerical Borel transform."""

    def test_central_binomial_coefficients(self, flagship_psi, logger):
        with mpmath.workprec(128):
            borel = borel_transform(flagship_psi, (1, 1), logger=logger)
            assert borel.kappa == 1
            assert borel.gamma == 0
            assert len(borel.coefficients) == 17
            for m, c in enumerate(borel.coefficients):
                assert abs(c - mpmath.binomial(2 * m, m)) < mpmath.mpf(10) ** -30 * (1 + abs(c))
            assert abs(borel.f_values[5] - mpmath.factorial(10) / mpmath.factorial(5)) < 1e-20
            assert abs(borel.radius_estimate() - mpmath.mpf(1) / 4) < mpmath.mpf("0.02")

    def test_evaluate_and_derivative(self, flagship_psi):
        with mpmath.workprec(128):
            borel = borel_transform(flagship_psi, (1, 1))
            zeta = mpmath.mpc(0, "0.001")
            exact = (1 - 4 * zeta) ** mpmath.mpf(-0.5)
            assert abs(borel.evaluate(zeta) - exact) < mpmath.mpf(10) ** -30
            derivative = 2 * (1 - 4 * zeta) ** mpmath.mpf(-1.5)
            assert abs(borel.derivative(zeta) - derivative) < mpmath.mpf(10) ** -30

    def test_fractional_gamma_and_kappa(self, psi_1356):
        with mpmath.workprec(128):
            borel = borel_transform(psi_1356, (1, 1, 1, 1))
            assert borel.kappa == 5
            assert borel.gamma == sympy.Rational(-4, 3)
            leading = 1 / mpmath.gamma(mpmath.mpf(11) / 15)
            assert abs(borel.coefficients[0] - leading) < mpmath.mpf(10) ** -30
            tenth = mpmath.mpf(10) / 27 / mpmath.gamma(mpmath.mpf(41) / 15)
            assert abs(borel.coefficients[10] - tenth) < mpmath.mpf(10) ** -30
            assert all(borel.coefficients[ell] == 0 for ell in range(1, 10))

    def test_gamma_pole(self, one_row):
        v = Exponent(v=(-1, 0), simplex=(0,), k=(0,))
        psi = psi_v(one_row, (0, 1), 2, v, Truncation(t_order=4, x_degree=0))
        with pytest.raises(GammaPole):
            borel_transform(psi, (1, 1))

    def test_vanishing_simplex_coordinate(self, flagship_psi):
        with pytest.raises(DomainViolation, match="simplex coordinate"):
            borel_transform(flagship_psi, (0, 1))

    def test_convergent_series_needs_kappa(self, geometric):
        with pytest.raises(InputError, match="pass kappa explicitly"):
            borel_transform(geometric, ())

    def test_symbolic_gamma_rejected(self, symbolic_psi):
        with pytest.raises(InputError, match="symbolic"):
            borel_transform(symbolic_psi, (1, 1))

    def test_at_precision_recomputes(self, flagship_psi):
        with mpmath.workprec(64):
            borel = borel_transform(flagship_psi, (1, 1))
        higher = borel.at_precision(256)
        assert higher.precision == 256
        assert borel.at_precision(64) is borel


class TestFormalBorel:
    """Tests for the exact Borel transform after t = z^r."""

    def test_substitute_t_power(self, psi_1356):
        series = substitute_t_power(psi_1356, "1/5")
        assert series.gamma == sympy.Rational(-4, 15)
        assert sorted({offset[-1] for offset in series.terms}) == [0, 2]
        assert all(c.coefficients[-1] in (0, 5) for c in series.window)

    def test_substitute_needs_integral_steps(self, flagship_psi):
        with pytest.raises(InputError, match="not an integer"):
            substitute_t_power(flagship_psi, "1/3")

    def test_gamma_ratio_coefficients(self, psi_1356):
        series = borel_transform_formal(psi_1356, "1/5")
        coefficients = {offset[-1]: c for offset, c in series.terms.items()}
        n0 = sympy.Rational(-4, 15)
        assert coefficients[0] == 1
        assert coefficients[2] == sympy.Rational(10, 27) / sympy.rf(1 + n0, 2)

    def test_formal_pole(self, one_row):
        v = Exponent(v=(-1, 0), simplex=(0,), k=(0,))
        psi = psi_v(one_row, (0, 1), 2, v, Truncation(t_order=2, x_degree=0))
        with pytest.raises(GammaPole):
            formal_borel(psi)

    def test_theta_commutes(self, symbolic_psi):
        """theta_zeta B[phi] = B[theta_z phi] coefficient by coefficient."""
        theta = WeylOperator.theta(3, 2)
        left = by_exponent(apply(theta, formal_borel(symbolic_psi)))
        right = by_exponent(formal_borel(apply(theta, symbolic_psi)))
        assert left.keys() == right.keys()
        for exponent, coeff in left.items():
            assert sympy.simplify(coeff - right[exponent]) == 0

    def test_derivative_undoes_multiplication(self, symbolic_psi):
        """d_zeta B[z phi] = B[phi] with a common normalization."""
        n0 = symbolic_psi.base[-1]
        shifted = formal_borel(multiply_by_power(symbolic_psi, 1), normalization=n0)
        left = by_exponent(apply(WeylOperator.partial(3, 2), shifted))
        right = by_exponent(formal_borel(symbolic_psi, normalization=n0))
        assert left
        for exponent, coeff in left.items():
            assert sympy.simplify(coeff - right[exponent]) == 0

    def test_annihilated_by_borel_system(self, one_row, symbolic_psi, symbols, logger):
        beta, alpha = symbols
        system = borel_matrix(one_row, (0, 1), 1, [beta], alpha)
        generators = system_generators(
            "borel", system.matrix.matrix, system.beta, degree_bound=4, logger=logger
        )
        report = annihilation_report(generators, borel_transform_formal(symbolic_psi, 1), logger)
        assert report.passed()


class TestBorelMatrix:
    """Tests for Borel matrices and their parameters."""

    def test_example12(self, one_row):
        system = borel_matrix(one_row, (0, 1), 1, [-1])
        assert system.matrix.matrix == sympy.Matrix([[1, 2, 0], [0, 1, -1]])
        assert system.beta == (-1, 0)

    def test_example1356_both_variants(self, one_three_five_six):
        expected = sympy.Matrix([[1, 3, 5, 6, 0], [-4, -2, 0, 1, -5]])
        gevrey = borel_matrix(one_three_five_six, (-4, -2, 0, 1), "1/5", ["1/3"])
        sigma = borel_matrix(one_three_five_six, (-4, -2, 0, 1), 5, ["1/3"], variant="sigma")
        assert gevrey.matrix.matrix == expected
        assert sigma.matrix.matrix == expected
        assert sigma.variant == "sigma"

    def test_normalization(self):
        system = borel_matrix(ConfigMatrix([[1, 3]]), (1, 1), 2, ["1/3"], alpha="1/5")
        assert system.matrix.matrix == sympy.Matrix([[1, 3, 0], [1, 1, sympy.Rational(-1, 2)]])
        matrix, beta = system.normalized()
        assert matrix == sympy.Matrix([[1, 3, 0], [2, 2, -1]])
        assert beta == (sympy.Rational(1, 3), sympy.Rational(2, 5))

    def test_rejects_bad_input(self, one_row):
        with pytest.raises(InputError, match="Unknown Borel matrix variant"):
            borel_matrix(one_row, (0, 1), 1, [0], variant="other")
        with pytest.raises(InputError, match="positive rational"):
            borel_matrix(one_row, (0, 1), -1, [0])
        with pytest.raises(InputError, match="beta has 2 entries"):
            borel_matrix(one_row, (0, 1), 1, [0, 0])


class TestSummabilityHypotheses:
    """Tests for the Borel summability hypothesis checks."""

    def test_example12(self, one_row, logger):
        report = check_summability_hypotheses(one_row, (0, 1), gamma=0, logger=logger)
        assert report.r == 1
        assert report.ones_outside_rowspan_a
        assert report.ones_in_rowspan_aw
        assert report.ones_in_rowspan_aw_via_image
        assert report.kernel_integrality
        assert report.r_gamma_not_integer is False
        assert not report.passed

    def test_example12_without_gamma(self, one_row):
        report = check_summability_hypotheses(one_row, (0, 1))
        assert report.r_gamma_not_integer is None
        assert report.passed

    def test_example1356(self, one_three_five_six):
        report = check_summability_hypotheses(
            one_three_five_six, (-4, -2, 0, 1), r="1/5", gamma="-4/3"
        )
        assert report.kernel_integrality
        assert report.r_gamma_not_integer is True
        assert report.passed

    def test_homogeneous_configuration_fails(self, config_matrix_factory):
        a = config_matrix_factory([1, 1, 1], [0, 1, 2])
        report = check_summability_hypotheses(a, (0, 0, 1), r=1)
        assert not report.ones_outside_rowspan_a
        assert not report.passed


class TestLaplaceSum:
    """Tests for the numerical Laplace integral along a ray."""

    def test_polynomial_transform_is_exact(self, geometric, logger):
        with mpmath.workprec(128):
            borel = borel_transform(geometric, (), kappa=1)
            t = mpmath.mpf("0.05")
            result = laplace_sum(borel, 0, t, mode="series", logger=logger)
            expected = sum(t**ell for ell in range(13))
            assert abs(result.value - expected) < mpmath.mpf(10) ** -30
            assert result.mode == "series"
            assert result.precision == 128

    def test_ode_mode_matches_closed_form(self, flagship_psi, logger):
        with mpmath.workprec(128):
            borel = borel_transform(flagship_psi, (1, 1))
            t = mpmath.mpc(0, "0.1")
            result = laplace_sum(
                borel, mpmath.pi / 2, t, mode="ode", ode=example12_ode((1, 1), -1), logger=logger
            )
            assert abs(result.value - closed_form_sum(t)) < mpmath.mpf(10) ** -20
            assert result.error < mpmath.mpf(10) ** -20

    def test_closed_form_mode(self, flagship_psi):
        with mpmath.workprec(128):
            borel = borel_transform(flagship_psi, (1, 1))
            t = mpmath.mpc(0, "0.1")
            result = laplace_sum(
                borel,
                mpmath.pi / 2,
                t,
                mode="closed_form",
                function=lambda z: (1 - 4 * z) ** mpmath.mpf(-0.5),
                singularities=["1/4"],
            )
            assert abs(result.value - closed_form_sum(t)) < mpmath.mpf(10) ** -25

    def test_series_mode_refuses_far_cutoff(self, flagship_psi):
        with mpmath.workprec(128):
            borel = borel_transform(flagship_psi, (1, 1))
            with pytest.raises(DomainViolation, match="too far out"):
                laplace_sum(borel, mpmath.pi / 2, mpmath.mpc(0, "0.1"), mode="series")

    def test_singular_direction_from_ode(self, flagship_psi):
        with mpmath.workprec(64):
            borel = borel_transform(flagship_psi, (1, 1))
            with pytest.raises(SingularDirection):
                laplace_sum(borel, 0, mpmath.mpf("0.1"), mode="ode", ode=example12_ode((1, 1), -1))

    def test_singular_direction_given(self, flagship_psi):
        with mpmath.workprec(64):
            borel = borel_transform(flagship_psi, (1, 1))
            directions = singular_directions_example12((1, 1))
            with pytest.raises(SingularDirection):
                laplace_sum(
                    borel, 0, mpmath.mpf("0.1"), mode="series", singular_directions=directions
                )

    def test_outside_sector(self, flagship_psi):
        with mpmath.workprec(64):
            borel = borel_transform(flagship_psi, (1, 1))
            with pytest.raises(DomainViolation, match="not below"):
                laplace_sum(borel, mpmath.pi / 2, mpmath.mpf("0.1"))
            with pytest.raises(DomainViolation, match="t = 0"):
                laplace_sum(borel, mpmath.pi / 2, 0)

    def test_ode_mode_needs_equation(self, flagship_psi):
        with mpmath.workprec(64):
            borel = borel_transform(flagship_psi, (1, 1))
            with pytest.raises(InputError, match="needs the equation"):
                laplace_sum(borel, mpmath.pi / 2, mpmath.mpc(0, "0.1"), mode="ode")

    @pytest.mark.slow
    def test_precision_escalation(self, flagship_psi, logger):
        with mpmath.workprec(64):
            borel = borel_transform(flagship_psi, (1, 1))
        policy = DoublingPrecisionPolicy(start_bits=64, max_bits=512, logger=logger)
        result = laplace_sum(
            borel,
            mpmath.pi / 2,
            mpmath.mpc(0, "0.1"),
            mode="ode",
            precision_policy=policy,
            ode=example12_ode((1, 1), -1),
        )
        assert result.precision >= 128
        assert result.converged is not None
        with mpmath.workprec(128):
            assert abs(result.value - closed_form_sum(mpmath.mpc(0, "0.1"))) < 1e-15


@pytest.mark.slow
class TestAsymptoticCheck:
    """Tests for the Gevrey asymptotic check of computed Borel sums."""

    @pytest.fixture
    def sums(self, flagship_psi):
        with mpmath.workprec(128):
            borel = borel_transform(flagship_psi, (1, 1))
            ode = example12_ode((1, 1), -1)
            results = [
                laplace_sum(borel, mpmath.pi / 2, t, mode="ode", ode=ode) for t in T_GRID
            ]
        return borel, results

    def test_passes_for_true_sums(self, sums, logger):
        borel, results = sums
        with mpmath.workprec(128):
            report = asymptotic_check(
                results, borel.f_values, borel.kappa, borel.gamma, n_max=15, logger=logger
            )
            assert abs(results[-1].value - 1) < mpmath.mpf("1e-3")
        assert report.passed, report.failures
        assert report.slopes
        assert 0 < report.growth < float("inf")
        assert 0 < report.constant < float("inf")
        logger.info.assert_called_once()

    def test_rejects_perturbed_sums(self, sums):
        borel, results = sums
        with mpmath.workprec(128):
            shift = mpmath.mpf("1e-6")
            perturbed = [r.model_copy(update={"value": r.value + shift}) for r in results]
            report = asymptotic_check(perturbed, borel.f_values, borel.kappa, borel.gamma, n_max=15)
        assert not report.passed
        assert report.failures


class TestSingularDirections:
    """Tests for the singular directions of the A = (1 2) Borel transform."""

    def test_real_point(self):
        assert singular_directions_example12((1, 1)) == (0,)

    def test_rotated_points(self):
        assert singular_directions_example12((sympy.I, 1)) == (sympy.pi,)
        assert singular_directions_example12((1, -1)) == (sympy.pi,)

    def test_zero_coordinate(self):
        with pytest.raises(InputError):
            singular_directions_example12((0, 1))


class TestSampleGrowth:
    """Tests for growth sampling along a ray."""

    def test_algebraic_growth(self, logger):
        with mpmath.workprec(64):
            sample = sample_growth(
                lambda z: (1 - 4 * z) ** mpmath.mpf(-0.5),
                mpmath.pi / 2,
                [1, 2, 4, 8, 16, 32],
                logger=logger,
            )
        assert sample.is_subexponential()
        assert abs(sample.power + 0.5) < 0.05
        logger.warning.assert_not_called()

    def test_exponential_growth(self, logger):
        with mpmath.workprec(64):
            sample = sample_growth(mpmath.exp, 0, [1, 2, 3, 4, 5], logger=logger)
        assert not sample.is_subexponential()
        assert abs(sample.exponential_rate - 1) < 1e-6
        logger.warning.assert_called_once()

    def test_needs_two_radii(self):
        with pytest.raises(InputError):
            sample_growth(mpmath.exp, 0, [1])
