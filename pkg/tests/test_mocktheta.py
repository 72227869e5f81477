import math
from fractions import Fraction

import pytest

from cyclomock.exactfield import conjugate, embed_complex, make_context
from cyclomock.mocktheta import (
    CATALOG,
    DIAGNOSTIC_IDS,
    MAIN_IDS,
    PRIMED_IDS,
    UnknownFunction,
    catalog_lookup,
    describe,
    evaluate_at_root,
    evaluate_truncated,
    root_point,
)
from cyclomock.qseries import DenominatorZero, NonTerminating
from oracles import TABLE, direct_value


def test_catalog_shape():
    assert len(MAIN_IDS) == 23
    assert len(PRIMED_IDS) == 10
    assert set(TABLE) == set(MAIN_IDS)
    assert not set(MAIN_IDS) & set(DIAGNOSTIC_IDS)
    for fid in PRIMED_IDS:
        assert CATALOG[fid].inversion_partner in MAIN_IDS


def test_unknown_function():
    with pytest.raises(UnknownFunction):
        catalog_lookup("nope")
    with pytest.raises(KeyError):
        evaluate_at_root("nope", 3)


def test_describe_mentions_parts():
    text = describe("sigma_neg")
    assert "negate" in text and "sigma_neg" in text


def test_known_small_values():
    z3 = make_context(3).zeta
    assert evaluate_at_root("phi", 3).value == -2 * z3
    assert evaluate_at_root("sigma_neg", 3).value == z3**2
    assert evaluate_at_root("u", 3).value == 3 + z3
    z5 = make_context(5).zeta
    assert evaluate_at_root("phi", 5).value == z5**4
    assert evaluate_at_root("sigma_neg", 5).value == -z5**3 / 2


def test_values_at_one():
    assert evaluate_at_root("phi", 1).value == 1
    assert evaluate_at_root("sigma_neg", 1).value == Fraction(-1, 2)
    for fid in MAIN_IDS:
        v = evaluate_at_root(fid, 1).value
        assert v.is_rational() and not v.is_zero()


def test_j_routing():
    # zeta_15^5 is a primitive cube root
    assert root_point(15, 5) == make_context(3).zeta
    assert evaluate_at_root("phi", 15, 5).value == evaluate_at_root("phi", 3, 1).value
    assert evaluate_at_root("phi", 7, 8).value == evaluate_at_root("phi", 7, 1).value
    assert evaluate_at_root("phi", 7, 0).value == evaluate_at_root("phi", 1).value


def test_even_order_rejected():
    with pytest.raises(ValueError):
        evaluate_at_root("phi", 4)


def test_error_paths():
    with pytest.raises(DenominatorZero) as exc:
        evaluate_at_root("rho_plain", 3)
    assert exc.value.k == 1
    with pytest.raises(NonTerminating):
        evaluate_at_root("f_third_order", 3, cap=12)


@pytest.mark.parametrize("fid", MAIN_IDS)
@pytest.mark.parametrize("n", [3, 5, 7, 9, 13, 21])
def test_matches_float_oracle(fid, n):
    for j in (1, 2, n - 1):
        if math.gcd(j, n) != 1:
            continue
        exact = evaluate_at_root(fid, n, j).value
        got = embed_complex(exact)
        assert abs(got - direct_value(fid, n, j)) < 1e-9


@pytest.mark.parametrize("fid", MAIN_IDS)
def test_termination_index_bounded(fid):
    for n in range(3, 60, 2):
        res = evaluate_at_root(fid, n)
        assert 0 <= res.terminated_at <= n
        assert res.last_term is not None


def test_galois_equivariance_spot():
    n = 15
    base = evaluate_at_root("psi", n).value
    for k in (2, 7, 11, 14):
        assert evaluate_at_root("psi", n, k).value == conjugate(base, k)


@pytest.mark.parametrize("fid", [i for i in DIAGNOSTIC_IDS if i.endswith("_display")])
def test_printed_primed_displays_are_not_inversions(fid):
    # the printed corollary forms do not satisfy f'(q) = f(1/q)
    partner = CATALOG[fid].inversion_partner
    mismatches = 0
    for n in (7, 9, 11, 13):
        try:
            left = evaluate_at_root(fid, n).value
        except (DenominatorZero, NonTerminating):
            mismatches += 1
            continue
        if left != evaluate_at_root(partner, n, n - 1).value:
            mismatches += 1
    assert mismatches > 0


def test_evaluate_truncated():
    assert abs(evaluate_truncated("phi", 0.1, 30) - 0.9190727) < 1e-6
    with pytest.raises(ValueError):
        evaluate_truncated("phi", 0.1, 0)
    # the substitution is applied to the float point as well
    a = evaluate_truncated("sigma_neg", 0.2, 40)
    assert abs(a - evaluate_truncated("sigma_plain", -0.2, 40)) < 1e-15
