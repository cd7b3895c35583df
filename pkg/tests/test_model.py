import json
import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
from conftest import admissible_params
from hypothesis import given, settings
from hypothesis import strategies as st

from crimedyn import analysis
from crimedyn.errors import InadmissibleError, ParameterError
from crimedyn.model import (
    PARAM_NAMES,
    ModelParams,
    Region,
    StateVec,
    check_admissible,
    format_params,
    in_region,
    incidence,
    load_params,
    params_from_mapping,
    parse_params_text,
    rhs,
    total_population_derivative,
    total_population_exact,
)

TABLE4_TEXT = """\
# endemic table
pi = 13820
mu = 1/75
theta = 0.09
epsilon = 0.2
sigma = 0.6
beta = 0.0000018
alpha = 0.000002
gamma = 0.8
p = 0.2
q = 0.4
"""


class TestIncidence:
    def test_mass_action_limit(self, table4):
        pr = table4.replace(beta=1.0, alpha=0.0)
        assert incidence(pr, 2.0, 3.0) == 6.0

    def test_no_criminals(self, table4):
        assert incidence(table4, 316649.0, 0.0) == 0.0

    def test_endemic_point_value(self, table4):
        expected = Fraction("1.8e-6") * 316649 * 781 * (1 + Fraction("2e-6") * 781)
        assert incidence(table4, 316649.0, 781.0) == pytest.approx(float(expected), rel=1e-14)
        assert incidence(table4, 316649.0, 781.0) == pytest.approx(445.8, abs=0.05)


class TestRhs:
    def test_origin(self, table4):
        assert rhs(table4, (0, 0, 0, 0)) == pytest.approx((11056.0, 2764.0, 0.0, 0.0), abs=1e-9)

    def test_crime_free_state_is_rest_point(self, table4):
        y = analysis.crime_free_state(table4)
        assert max(abs(v) for v in rhs(table4, y)) <= 1e-9 * table4.pi

    def test_endemic_residual(self, table4):
        (eq,) = analysis.endemic_equilibria(table4)
        assert max(abs(v) for v in rhs(table4, eq.state)) < 1e-9 * table4.pi

    def test_returns_statevec(self, table4):
        out = rhs(table4, StateVec(1.0, 2.0, 3.0, 4.0))
        assert isinstance(out, StateVec)

    @settings(max_examples=200, deadline=None)
    @given(admissible_params(), st.lists(st.floats(0, 2e6), min_size=4, max_size=4))
    def test_sum_consistency(self, pr, y):
        n = sum(y)
        lhs = sum(rhs(pr, y))
        # the incidence term cancels between S2 and C; its rounding scales with its size
        gross = pr.pi + pr.mu * n + 2.0 * incidence(pr, y[1], y[2]) + (pr.theta + pr.epsilon) * n
        gross += (pr.gamma + pr.sigma) * n
        assert abs(lhs - (pr.pi - pr.mu * n)) <= 1e-12 * (pr.pi + pr.mu * n) + 8 * np.finfo(float).eps * gross

    @settings(max_examples=200, deadline=None)
    @given(admissible_params(), st.lists(st.floats(0, 1e6), min_size=4, max_size=4), st.integers(0, 3))
    def test_boundary_components_nonnegative(self, pr, y, k):
        y = list(y)
        y[k] = 0.0
        assert rhs(pr, y)[k] >= 0.0


class TestTotalPopulation:
    def test_zero_at_carrying_total(self):
        pr = ModelParams(pi=13820, mu=Fraction(1, 75), theta=0.09, epsilon=0.2, sigma=0.6,
                         beta=1.8e-6, alpha=2e-6, gamma=0.8, p=0.2, q=0.4)
        assert Fraction(13820) / Fraction(1, 75) == 1036500
        assert total_population_derivative(pr, (1036500.0, 0, 0, 0)) == pytest.approx(0.0, abs=1e-9)

    def test_empty_population(self, table4):
        assert total_population_derivative(table4, (0, 0, 0, 0)) == table4.pi

    def test_double_carrying_total(self, table4):
        n = 2 * table4.pi / table4.mu
        assert total_population_derivative(table4, (n, 0, 0, 0)) == pytest.approx(-table4.pi)

    def test_exact_solution_satisfies_ode(self, table4):
        t = np.linspace(0, 300, 7)
        n = total_population_exact(table4, 3e6, t)
        dn = -table4.mu * (n - table4.pi / table4.mu)
        assert np.allclose(dn, table4.pi - table4.mu * n)
        assert n[0] == pytest.approx(3e6)


class TestRegion:
    def test_origin_inside(self, table4):
        assert in_region(table4, (0, 0, 0, 0))

    def test_boundary_inside(self, table4):
        k = table4.pi / table4.mu
        assert in_region(table4, (k, 0, 0, 0))
        assert in_region(table4, (k / 4,) * 4)

    def test_negative_outside(self, table4):
        assert not in_region(table4, (-1, 0, 0, 0))

    def test_above_bound_outside(self, table4):
        k = table4.pi / table4.mu
        assert not in_region(table4, (k * (1 + 1e-9), 0, 0, 0))
        assert Region.of(table4).contains((k * (1 + 1e-9), 0, 0, 0), slack=1e-8)


class TestValidation:
    @pytest.mark.parametrize(
        "field,value",
        [("mu", 0.0), ("pi", 0.0), ("beta", -1.0), ("sigma", math.nan), ("gamma", math.inf),
         ("p", 1.5), ("q", -0.1), ("alpha", "x"), ("theta", True)],
    )
    def test_rejects(self, table4, field, value):
        with pytest.raises(ParameterError, match=field):
            table4.replace(**{field: value})

    @pytest.mark.parametrize("field", ["p", "q"])
    @pytest.mark.parametrize("value", [0.0, 1.0])
    def test_degenerate_proportions_need_override(self, table4, field, value):
        with pytest.raises(ParameterError, match="open interval"):
            table4.replace(**{field: value})
        with pytest.warns(UserWarning, match="degenerate"):
            pr = table4.replace(allow_degenerate=True, **{field: value})
        assert getattr(pr, field) == value

    def test_values_coerced_to_float(self):
        pr = params_from_mapping({k: "1/2" if k in ("p", "q") else 1 for k in PARAM_NAMES})
        assert all(type(v) is float for v in pr.as_tuple())

    def test_lambda_positive_for_valid_params(self, table4):
        assert check_admissible(table4) is table4

    def test_check_admissible_rejects_nonpositive_lambda(self, table4):
        class Fake:
            lambda_cap = 0.0

        with pytest.raises(InadmissibleError):
            check_admissible(Fake())


class TestParsing:
    def test_key_value_text(self, table4):
        assert parse_params_text(TABLE4_TEXT) == table4

    def test_decimal_parsing_is_exact(self):
        pr = parse_params_text(TABLE4_TEXT)
        assert pr.beta == float(Fraction("0.0000018"))
        assert pr.mu == float(Fraction(1, 75))

    def test_missing_key_named(self):
        text = "\n".join(line for line in TABLE4_TEXT.splitlines() if not line.startswith("gamma"))
        with pytest.raises(ParameterError, match="gamma"):
            parse_params_text(text)

    def test_unknown_key(self):
        with pytest.raises(ParameterError, match="delta"):
            parse_params_text(TABLE4_TEXT + "delta = 1\n")

    def test_duplicate_key(self):
        with pytest.raises(ParameterError, match="duplicate"):
            parse_params_text(TABLE4_TEXT + "pi = 1\n")

    @pytest.mark.parametrize("bad", ["pi 13820", "pi = abc", "pi = 1/0"])
    def test_malformed_lines(self, bad):
        text = "\n".join(bad if line.startswith("pi") else line for line in TABLE4_TEXT.splitlines())
        with pytest.raises(ParameterError):
            parse_params_text(text)

    def test_json_mirror(self, tmp_path, table4):
        path = tmp_path / "t4.json"
        path.write_text(json.dumps(table4.as_dict()))
        assert load_params(path) == table4

    def test_load_text_file(self, tmp_path, table4):
        path = tmp_path / "t4.params"
        path.write_text(TABLE4_TEXT)
        assert load_params(path) == table4

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(ParameterError, match="cannot read"):
            load_params(tmp_path / "missing.params")

    @pytest.mark.parametrize("text", ["{not json", "[1, 2]"])
    def test_bad_json(self, tmp_path, text):
        path = tmp_path / "bad.json"
        path.write_text(text)
        with pytest.raises(ParameterError):
            load_params(path)

    def test_format_round_trip(self, table4):
        assert parse_params_text(format_params(table4)) == table4

    def test_no_warnings_for_valid_file(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            parse_params_text(TABLE4_TEXT)
