import json
import random

import pytest

from boxzeta.exactla import RankDeficient
from boxzeta.ffield import odd_primes
from boxzeta.tracefit import (
    PAPER_MULTIPLICITIES,
    ZERO_MULTIPLICITIES,
    InadmissibleSolution,
    MultiplicityVector,
    basis_traces,
    design_matrix,
    fit_multiplicities,
    fit_report,
    picard_report,
    surface_counts,
    trace_rhs,
    verify_identity,
)
from boxzeta.exactla import matrix_rank


@pytest.mark.parametrize("p,expected", [(5, 48), (7, 120), (3, 24)])
def test_trace_rhs_examples(p, expected):
    assert trace_rhs(p, PAPER_MULTIPLICITIES) == expected


def test_trace_rhs_accepts_tuples():
    assert trace_rhs(5, (3, 1, 3, 10, 2, 1, 3)) == 48


def test_rank_bookkeeping():
    m = PAPER_MULTIPLICITIES
    assert m.rank == 30 and m.rank + 48 == 78
    assert m.algebraic_rank == 16


def test_basis_distinct_and_full_rank():
    primes = odd_primes(97)
    cols = list(zip(*design_matrix(primes)))
    assert len(set(cols)) == 7
    assert matrix_rank(design_matrix(odd_primes(41))) == 7


def test_verify_identity_headline():
    rep = verify_identity(97)
    assert rep.success
    assert set(rep.residuals) == set(odd_primes(97))
    assert all(r == 0 for r in rep.residuals.values())


def test_verify_alternative_h16_convention_pattern():
    rep = verify_identity(97, h16_inert="minus2p")
    assert not rep.success
    for p, r in rep.residuals.items():
        assert r == (6 * p if p % 4 == 3 else 0)


def test_verify_zero_motive():
    rep = verify_identity(5, ZERO_MULTIPLICITIES)
    assert rep.residuals[5] == 48 - 26
    assert rep.residuals[3] == 24 - 10


def test_verify_rejects_small_pmax():
    with pytest.raises(ValueError):
        verify_identity(2)


def test_fit_on_primes_to_50():
    assert fit_multiplicities(odd_primes(50)) == PAPER_MULTIPLICITIES


def test_fit_first_twelve_primes():
    assert fit_multiplicities(odd_primes(200)[:12]) == PAPER_MULTIPLICITIES


def test_fit_first_ten_primes_is_rank_deficient():
    # 3..31 contains only one prime = 1 mod 8, so h32 + h8 is not separated
    with pytest.raises(RankDeficient):
        fit_multiplicities(odd_primes(200)[:10])


def test_fit_requires_eight_primes():
    with pytest.raises(RankDeficient):
        fit_multiplicities([3, 5, 7])


def test_fit_is_stable_over_subsets():
    primes = odd_primes(97)
    rng = random.Random(1)
    done = 0
    while done < 15:
        subset = sorted(rng.sample(primes, rng.randint(8, 16)))
        if matrix_rank(design_matrix(subset)) < 7:
            continue
        assert fit_multiplicities(subset) == PAPER_MULTIPLICITIES
        done += 1


def test_fit_alternative_convention_is_inadmissible():
    with pytest.raises(InadmissibleSolution) as info:
        fit_multiplicities(odd_primes(50), "minus2p")
    # h16 multiplicity unchanged; trivial/chi_-4 shifted by +-3
    assert info.value.solution == (3, 1, 3, 13, -1, 1, 3)


def test_picard_report():
    rep = picard_report(PAPER_MULTIPLICITIES)
    paper, perm = rep["paper"]["split"], rep["permutation"]["split"]
    assert (paper["trivial"], paper["chi_m4"], paper["chi_m8"], paper["chi_8"]) == (34, 26, 1, 3)
    assert (perm["trivial"], perm["chi_m4"], perm["chi_m8"], perm["chi_8"]) == (46, 14, 1, 3)
    assert rep["paper"]["total"] == rep["permutation"]["total"] == 64 == 16 + 48


def test_fit_report_json_deterministic(tmp_path):
    a = fit_report(97).to_json()
    b = fit_report(97).to_json()
    assert a == b
    doc = json.loads(a)
    assert doc["success"] and doc["multiplicities"]["h16"] == 3
    assert doc["conventions"]["h16_inert"] == "zero"
    assert set(doc["picard_splits"]) == {"paper", "permutation"}
    assert doc["hypotheses_differ_at"] == [p for p in odd_primes(97) if p % 4 == 3]


def test_surface_counts_parallel_matches_serial():
    primes = odd_primes(40)
    assert surface_counts(primes, jobs=2) == surface_counts(primes)


def test_multiplicity_vector_roundtrip():
    m = MultiplicityVector.of([1, 2, 3, 4, 5, 6, 7])
    assert tuple(m) == (1, 2, 3, 4, 5, 6, 7)
    assert not MultiplicityVector.of([0, 0, 0, -1, 0, 0, 0]).is_admissible()


def test_basis_traces_shape():
    assert basis_traces(3) == (0, 2, -2, 3, -3, 3, -3)
