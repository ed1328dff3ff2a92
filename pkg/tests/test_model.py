"""Entry generators, spec variants, build layout and the JSON interface."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacspec.model import (
    BlendedSpec,
    ExplicitSpec,
    ExprGen,
    ExpSumGen,
    KMSpec,
    LogPowerGen,
    ModulatedSpec,
    PeriodicGen,
    PeriodicSeq,
    PowerGen,
    SpecError,
    TableGen,
    build,
    gamma_to_atilde,
    load_spec,
    parse_spec,
    validate,
)

EPS = np.finfo(float).eps


# ---------------------------------------------------------------------------
# periodic sequences
# ---------------------------------------------------------------------------

@given(st.lists(st.floats(-10, 10), min_size=1, max_size=7),
       st.integers(-1000, 1000))
def test_periodic_two_sided_extension(values, n):
    seq = PeriodicSeq(tuple(values))
    assert seq[n] == values[n % len(values)]


def test_periodic_sample_matches_getitem():
    seq = PeriodicSeq((1.0, 2.0, 3.0))
    idx = np.arange(-6, 12)
    assert np.array_equal(seq.sample(idx), [seq[int(n)] for n in idx])


def test_periodic_rejects_empty():
    with pytest.raises(SpecError):
        PeriodicSeq(())


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def test_power_gen_values():
    g = PowerGen(1.5, scale=2.0)
    assert g.at(0) == 2.0
    assert g.at(3) == 2.0 * 4.0 ** 1.5
    assert np.allclose(g.range_values(4), 2.0 * (np.arange(5) + 1.0) ** 1.5)


def test_log_power_gen_default_profile():
    g = LogPowerGen()
    n = np.arange(6)
    assert np.allclose(g.sample(n), (n + 1.0) * np.log(n + 2.0) ** 2)


def test_table_gen_bounds():
    g = TableGen((5.0, 6.0, 7.0))
    assert g.at(2) == 7.0
    with pytest.raises(SpecError):
        g.sample(np.arange(4))
    with pytest.raises(SpecError):
        g.sample(np.asarray([-1]))


def test_expr_gen_evaluates_with_numpy_semantics():
    g = ExprGen("sqrt(n + 1) + sin(n)")
    n = np.arange(5)
    assert np.allclose(g.sample(n), np.sqrt(n + 1.0) + np.sin(n))
    # constants broadcast to the requested shape
    assert ExprGen("pi + 0*n").sample(np.arange(3)).shape == (3,)


def test_expr_gen_rejects_non_whitelisted_names():
    with pytest.raises(SpecError):
        ExprGen("open('x')")
    with pytest.raises(SpecError):
        ExprGen("__import__('os').system('true')")
    with pytest.raises(SpecError):
        ExprGen("n +")  # syntax error


def test_exp_sum_gen_matches_array_form():
    g = ExpSumGen(1.3, ExprGen("n"))
    want = gamma_to_atilde(ExprGen("n"), 1.3, 6)
    assert np.array_equal(g.sample(np.arange(7)), want)
    # random access picks the same values
    assert g.at(4) == want[4]


# ---------------------------------------------------------------------------
# the cumulative profile
# ---------------------------------------------------------------------------

def test_gamma_to_atilde_constant_gamma():
    # gamma == 1, kappa = 1: the profile is exactly (1, e, e^2, ...)
    out = gamma_to_atilde(PowerGen(0.0), 1.0, 2)
    assert out[0] == 1.0
    assert abs(out[1] - math.e) <= 4 * EPS * math.e
    assert abs(out[2] - math.e ** 2) <= 8 * EPS * math.e ** 2


def test_gamma_to_atilde_harmonic_gamma():
    # gamma_j = j, kappa = 1: atilde_3 = exp(1 + 1/2 + 1/3) = exp(11/6)
    out = gamma_to_atilde(ExprGen("n"), 1.0, 3)
    assert out[3] == pytest.approx(math.exp(11.0 / 6.0), rel=1e-14)


def test_gamma_to_atilde_consecutive_ratios_exact():
    # the cumprod construction keeps every consecutive ratio within a few
    # ulp of exp(kappa/gamma_n); this is the property the closed forms need
    g = ExprGen("n")
    kappa = 1.7
    out = gamma_to_atilde(g, kappa, 5000)
    j = np.arange(1, 5001)
    want = np.exp(kappa / j)
    err = np.abs(out[1:] / out[:-1] - want) / want
    assert float(np.max(err)) <= 8 * EPS


def test_gamma_to_atilde_rate_condition():
    # gamma_j = j, kappa = 2: gamma_n (1 - atilde_{n-1}/atilde_n) -> kappa
    out = gamma_to_atilde(ExprGen("n"), 2.0, 1000)
    rate = 1000.0 * (1.0 - out[999] / out[1000])
    assert abs(rate - 2.0) < 0.003


def test_gamma_to_atilde_rejects_nonpositive_gamma():
    # 5 - n first fails at j = 5 (value 0); the error names that index
    with pytest.raises(SpecError) as err:
        gamma_to_atilde(ExprGen("5 - n"), 1.0, 10)
    assert err.value.field == "gamma"
    assert "gamma_5" in str(err.value)


def test_gamma_to_atilde_overflow_is_reported():
    with pytest.raises(SpecError) as err:
        gamma_to_atilde(PowerGen(0.0), 1000.0, 2)
    assert "overflow" in str(err.value)


def test_gamma_to_atilde_extended_agrees():
    a = gamma_to_atilde(ExprGen("n"), 1.0, 2000)
    b = gamma_to_atilde(ExprGen("n"), 1.0, 2000, extended=True)
    assert np.max(np.abs(a / b - 1.0)) < 1e-13


# ---------------------------------------------------------------------------
# spec variants and build
# ---------------------------------------------------------------------------

def test_build_explicit():
    spec = ExplicitSpec(PowerGen(1.0), PeriodicGen((0.0,)))
    a, b = build(spec, 4)
    assert np.array_equal(a, np.arange(1, 6, dtype=float))
    assert np.array_equal(b, np.zeros(5))


def test_build_reports_first_bad_offdiagonal():
    spec = ExplicitSpec(ExprGen("5 - n"), PeriodicGen((0.0,)))
    with pytest.raises(SpecError) as err:
        build(spec, 10)
    assert "a_5" in str(err.value)


def test_period_mismatch_rejected():
    with pytest.raises(SpecError):
        ModulatedSpec(PeriodicSeq((1.0, 1.0)), PeriodicSeq((0.0, 0.0, 0.0)),
                      PowerGen(1.0), PeriodicGen((0.0,)))


def test_km_requires_positive_kappa():
    with pytest.raises(SpecError) as err:
        KMSpec(PeriodicSeq((1.0,)), PeriodicSeq((0.0,)), ExprGen("n + 1"),
               PeriodicGen((0.0,)), 0.0)
    assert err.value.field == "kappa"


def test_build_km_formula():
    # a_n = alpha_n atilde_n (1 + f_n/gamma_n), b_n = (beta_n/alpha_n) a_n
    gamma = ExprGen("n + 1")
    f = PeriodicGen((0.5,))
    spec = KMSpec(PeriodicSeq((2.0,)), PeriodicSeq((1.0,)), gamma, f, 1.0)
    a, b = build(spec, 3)
    atl = gamma_to_atilde(gamma, 1.0, 3)
    n = np.arange(4)
    assert np.allclose(a, 2.0 * atl * (1.0 + 0.5 / (n + 1.0)), rtol=1e-15)
    assert np.allclose(b, 0.5 * a, rtol=1e-15)


def test_build_blended_layout_period_one():
    # block of length 3: periodic entry, then the two unbounded ones
    spec = BlendedSpec(PeriodicSeq((1.0,)), PeriodicSeq((0.0,)), PowerGen(1.2))
    a, b = build(spec, 8)
    ct = (np.arange(6) + 1.0) ** 1.2
    want = np.array([1.0, ct[0], ct[1], 1.0, ct[2], ct[3], 1.0, ct[4], ct[5]])
    assert np.array_equal(a, want)
    assert np.array_equal(b, np.zeros(9))


def test_build_blended_layout_period_two():
    spec = BlendedSpec(PeriodicSeq((1.0, 2.0)), PeriodicSeq((0.5, -0.5)),
                       ExprGen("10 + n"))
    a, b = build(spec, 11)
    ct = 10.0 + np.arange(6)
    want_a = np.array([1.0, 2.0, ct[0], ct[1],
                       1.0, 2.0, ct[2], ct[3],
                       1.0, 2.0, ct[4], ct[5]])
    want_b = np.array([0.5, -0.5, 0.0, 0.0] * 3)
    assert np.array_equal(a, want_a)
    assert np.array_equal(b, want_b)


def test_build_blended_custom_atilde():
    # a slowly converging bounded part replaces the exact periodic repeat
    spec = BlendedSpec(PeriodicSeq((1.0,)), PeriodicSeq((0.0,)),
                       PowerGen(1.2), atilde=ExprGen("1 + 1/(n + 2)"))
    a, _ = build(spec, 6)
    # periodic positions are 0, 3, 6 and carry atilde_0, atilde_1, atilde_2
    assert a[0] == 1.5
    assert a[3] == pytest.approx(1.0 + 1.0 / 3.0, rel=1e-15)
    assert a[6] == 1.25


def test_build_rejects_negative_n_max():
    with pytest.raises(SpecError):
        build(ExplicitSpec(PowerGen(1.0), PeriodicGen((0.0,))), -1)


# ---------------------------------------------------------------------------
# report-only validation
# ---------------------------------------------------------------------------

def test_validate_modulated_fixture_residuals_small():
    spec = ModulatedSpec(PeriodicSeq((1.0, 1.0)), PeriodicSeq((0.0, 0.0)),
                         PowerGen(1.0), PeriodicGen((0.0,)),
                         s=PeriodicSeq((1.0, 1.0)), z=PeriodicSeq((0.0, 0.0)))
    rep = validate(spec, probe_n=4096)
    assert rep.variant == "modulated"
    by_name = {c.name: c.value for c in rep.clauses}
    # a_n = n+1 tracks the constant profile with O(1/n) residuals
    assert by_name["sup tail |a_{n-1}/a_n - alpha_{n-1}/alpha_n|"] < 1e-3
    assert by_name["sup tail |b_n/a_n - beta_n/alpha_n|"] == 0.0
    # the declared corrections are exact for this fixture
    assert by_name["sup tail |alpha-ratio correction - s_n|"] < 1e-10
    assert by_name["sup tail |beta-ratio correction - z_n|"] == 0.0
    assert "report-only" in str(rep)


def test_validate_km_rate_clause():
    spec = KMSpec(PeriodicSeq((1.0, 1.0)), PeriodicSeq((0.0, 0.0)),
                  ExprGen("n + 1"), PeriodicGen((0.0, 1.0)), 2.0)
    rep = validate(spec, probe_n=2048)
    by_name = {c.name: c.value for c in rep.clauses}
    # the default profile approaches the rate with residual kappa^2/(2n)
    assert by_name["sup tail |gamma_n (1 - atilde_{n-1}/atilde_n) - kappa|"] < 2e-3
    assert by_name["sup |f_n| over probe"] == 1.0


def test_validate_never_raises_on_slow_convergence():
    # validation reports, it does not reject: a profile that violates the
    # modulation limits still comes back as a report
    spec = ModulatedSpec(PeriodicSeq((1.0,)), PeriodicSeq((0.0,)),
                         ExprGen("2 + sin(n)"), PeriodicGen((0.0,)))
    rep = validate(spec, probe_n=512)
    assert rep.clauses


# ---------------------------------------------------------------------------
# JSON interface
# ---------------------------------------------------------------------------

FIXTURE_KM = {
    "variant": "km",
    "alpha": [1.0, 1.0],
    "beta": [0.0, 0.0],
    "gamma": {"kind": "expr", "expr": "n + 1"},
    "f": {"kind": "periodic", "values": [0.0, 1.5]},
    "kappa": 2.0,
}


def test_parse_spec_round_trip():
    spec = parse_spec(FIXTURE_KM)
    assert isinstance(spec, KMSpec)
    direct = KMSpec(PeriodicSeq((1.0, 1.0)), PeriodicSeq((0.0, 0.0)),
                    ExprGen("n + 1"), PeriodicGen((0.0, 1.5)), 2.0)
    a1, b1 = build(spec, 64)
    a2, b2 = build(direct, 64)
    assert np.array_equal(a1, a2)
    assert np.array_equal(b1, b2)


def test_parse_spec_field_paths():
    bad = dict(FIXTURE_KM, f={"kind": "table"})
    with pytest.raises(SpecError) as err:
        parse_spec(bad)
    assert "f.values" in str(err.value)

    with pytest.raises(SpecError) as err:
        parse_spec({k: v for k, v in FIXTURE_KM.items() if k != "kappa"})
    assert err.value.field == "kappa"

    with pytest.raises(SpecError) as err:
        parse_spec(dict(FIXTURE_KM, variant="tridiagonal"))
    assert err.value.field == "variant"

    nested = dict(FIXTURE_KM,
                  gamma={"kind": "exp-sum", "kappa": 1.0,
                         "gamma": {"kind": "power"}})
    with pytest.raises(SpecError) as err:
        parse_spec(nested)
    assert "gamma.gamma.exponent" in str(err.value)


def test_parse_spec_n_consistency():
    with pytest.raises(SpecError) as err:
        parse_spec(dict(FIXTURE_KM, N=3))
    assert "alpha" in str(err.value)


def test_parse_spec_rejects_bool_as_number():
    with pytest.raises(SpecError):
        parse_spec(dict(FIXTURE_KM, kappa=True))


def test_load_spec_reports_line_and_column(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text('{\n  "variant": "km",\n  oops\n}\n', encoding="utf-8")
    with pytest.raises(SpecError) as err:
        load_spec(str(p))
    msg = str(err.value)
    assert "line 3" in msg and str(p) in msg


def test_load_spec_missing_file():
    with pytest.raises(SpecError):
        load_spec("/nonexistent/spec.json")


def test_load_spec_round_trip(tmp_path):
    p = tmp_path / "spec.json"
    p.write_text(json.dumps(FIXTURE_KM), encoding="utf-8")
    spec = load_spec(str(p))
    assert isinstance(spec, KMSpec)
    assert spec.kappa == 2.0


@settings(max_examples=40)
@given(st.lists(st.floats(0.1, 10.0), min_size=1, max_size=5))
def test_parse_periodic_preserves_values(values):
    obj = {"variant": "blended", "alpha": values, "beta": [0.0] * len(values),
           "ctilde": {"kind": "power", "exponent": 1.5}}
    spec = parse_spec(obj)
    assert spec.alpha.values == tuple(values)
