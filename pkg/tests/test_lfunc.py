import io
import json
import math

import numpy as np
import pytest

from boxzeta.cmforms import EXCLUDED, FormId, ap
from boxzeta.counting import count_surface_fast
from boxzeta.ffield import chi_m4, odd_primes
from boxzeta.lfunc import (
    PRESETS,
    EulerFactor,
    LSpec,
    Term,
    aggregate_factor,
    dirichlet_coeffs,
    euler_factor,
    evaluate_partial,
    export_table,
    lspec_from_multiplicities,
    preset,
    prime_coefficients,
    reciprocal_roots,
    write_csv,
)
from boxzeta.tracefit import PAPER_MULTIPLICITIES, trace_rhs


@pytest.mark.parametrize("component,p,shift,coeffs", [
    ("h8", 3, None, (1, 2, 9)),
    ("chi_m4", 3, 1, (1, 3)),
    ("zeta", 5, 1, (1, -5)),
    ("h16", 3, None, (1, 0, -9)),
    ("h32", 3, 1, (1, -6, 81)),
])
def test_euler_factor_examples(component, p, shift, coeffs):
    assert euler_factor(component, p, shift).coeffs == coeffs


def test_euler_factor_bad_prime():
    f = euler_factor("h16", 2)
    assert f.excluded and f.coeffs == (1,)
    assert aggregate_factor(preset("sbar"), 2).excluded


def test_euler_factor_unknown():
    with pytest.raises(ValueError):
        euler_factor("h99", 3)
    with pytest.raises(ValueError):
        Term("h99", 1)


def test_preset_degrees():
    assert preset("sbar").degree == 30
    assert preset("s-paper").degree == 78
    assert preset("s-perm").degree == 78
    for p in (3, 5, 97):
        assert aggregate_factor(preset("sbar"), p).degree == 30
        assert aggregate_factor(preset("s-paper"), p).degree == 78
    with pytest.raises(ValueError):
        preset("nope")


def test_presets_match_multiplicities():
    assert PRESETS["sbar"].terms == lspec_from_multiplicities(PAPER_MULTIPLICITIES).terms
    s_paper = {(t.component, t.shift): 0 for t in PRESETS["s-paper"].terms}
    for t in PRESETS["s-paper"].terms:
        s_paper[(t.component, t.shift)] += t.multiplicity
    assert s_paper[("zeta", 1)] == 34 and s_paper[("chi_m4", 1)] == 26


def test_aggregate_equals_product_of_components():
    spec = preset("sbar")
    p = 13
    direct = EulerFactor(p, (1,))
    for t in spec.terms:
        for _ in range(t.multiplicity):
            direct = direct * euler_factor(t.component, p, t.shift)
    assert aggregate_factor(spec, p) == direct


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_purity(name):
    spec = preset(name)
    for p in odd_primes(97):
        roots = reciprocal_roots(spec, p)
        assert len(roots) == spec.degree
        assert np.all(np.abs(np.abs(roots) / p - 1) <= 1e-9)


def test_weight3_discriminant_bound():
    for p in odd_primes(97):
        for f in ("h8", "h16", "h32"):
            if FormId(f).eps(p) == 1:
                assert ap(f, p) ** 2 <= 4 * p * p


def test_dirichlet_coeffs_examples():
    d = dirichlet_coeffs(preset("sbar"), 30)
    assert d[0] == 1
    assert d[2] == 14 == trace_rhs(3, PAPER_MULTIPLICITIES) - 10
    assert all(d[n - 1] is EXCLUDED for n in range(2, 31, 2))


def test_coefficient_trace_duality():
    d = dirichlet_coeffs(preset("sbar"), 97)
    for p in odd_primes(97):
        assert d[p - 1] == count_surface_fast(p).count - p * p - 1
    assert prime_coefficients(preset("sbar"), [3, 5, 9]) == {3: 14, 5: 22}


def test_dirichlet_multiplicative_and_prime_powers():
    spec = preset("sbar")
    d = dirichlet_coeffs(spec, 400)
    assert d[15 - 1] == d[3 - 1] * d[5 - 1]
    assert d[3 * 7 * 11 - 1] == d[2] * d[6] * d[10]
    inv = aggregate_factor(spec, 3).series_inverse(5)
    assert [d[3 ** k - 1] for k in range(6)] == inv


def test_series_inverse():
    f = EulerFactor(3, (1, -2, 9))
    inv = f.series_inverse(6)
    prod = [sum(f.coeffs[j] * inv[n - j] for j in range(3) if 0 <= n - j) for n in range(7)]
    assert prod == [1, 0, 0, 0, 0, 0, 0]


def test_evaluate_partial_single_factor():
    spec = preset("sbar")
    v = evaluate_partial(spec, 4, 3)
    brute = 1.0 / aggregate_factor(spec, 3)(3.0 ** -4)
    assert math.isclose(v.value, brute, rel_tol=1e-12)


def test_evaluate_partial_empty():
    assert evaluate_partial(LSpec(), 4, 97).value == 1.0


def test_evaluate_partial_tail():
    spec = preset("sbar")
    v97 = evaluate_partial(spec, 4, 97)
    v89 = evaluate_partial(spec, 4, 89)
    assert abs(v97.value - v89.value) < 30 * 89 ** -3 * 2
    assert abs(v97.value - v89.value) <= v89.tail_bound
    far = evaluate_partial(spec, 4, 2000)
    assert abs(far.value - v97.value) <= v97.tail_bound
    assert v97.tail_bound < v89.tail_bound


def test_evaluate_partial_rejects_small_s():
    with pytest.raises(ValueError):
        evaluate_partial(preset("sbar"), 3, 97)


def test_export_table(tmp_path):
    csv_path, json_path = tmp_path / "t.csv", tmp_path / "t.json"
    rows = export_table(13, csv_path, json_path)
    r5 = next(r for r in rows if r["p"] == 5)
    assert r5["a_f32"] == -2
    r3 = next(r for r in rows if r["p"] == 3)
    assert r3["count_surface"] == 24 and r3["g_pair_re"] == 0 and r3["g_pair_im"] == 2
    text = csv_path.read_text()
    assert text.startswith("# index-2 data excluded")
    header = text.splitlines()[1].split(",")
    assert header[:10] == ["p", "a_f32", "a_f64", "g_pair_re", "g_pair_im", "a_h8", "a_h16",
                           "a_h32", "count_surface", "count_X"]
    assert header[10:] == [f"factor_c{i}" for i in range(31)]
    doc = json.loads(json_path.read_text())
    assert doc["excluded"]["p"] == 2
    assert doc["rows"][0]["g_pair"] == {"re": 0, "im": 2}


def test_export_table_io_error(tmp_path):
    bad = tmp_path / "missing" / "t.csv"
    with pytest.raises(OSError, match="missing"):
        export_table(5, csv_path=bad)


def test_write_csv_exact_integers():
    buf = io.StringIO()
    write_csv(export_table(7), buf)
    last = buf.getvalue().strip().splitlines()[-1].split(",")
    assert all("." not in v for v in last)
    assert int(last[-1]) == aggregate_factor(preset("sbar"), 7).coeffs[-1]


def test_exceptional_factor_trace():
    for p in odd_primes(50):
        paper = prime_coefficients(preset("s-paper"), [p])[p]
        sbar = prime_coefficients(preset("sbar"), [p])[p]
        assert paper - sbar == 24 * p + 24 * chi_m4(p) * p
