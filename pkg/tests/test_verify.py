import math

import pytest

from cyclomock.exactfield import make_context
from cyclomock.verify import (
    DISK_RELATIONS,
    LINEAR_IDENTITIES,
    MARGIN_IDS,
    check_even_half_product,
    check_galois,
    check_inversion,
    check_linear_identity,
    check_n_product,
    check_terminal_term,
    check_unit_product,
    disk_residual,
    margin_report,
    run_suite,
)
from cyclomock.mocktheta import PRIMED_IDS
from oracles import partial_sums

ODD = list(range(1, 52, 2))


@pytest.mark.parametrize("n", ODD)
def test_products(n):
    for check in (check_unit_product, check_n_product, check_terminal_term, check_even_half_product):
        out = check(n)
        assert out.passed, (check.__name__, n, out.witness)
        assert out.witness is None


def test_product_checks_reject_even():
    with pytest.raises(ValueError):
        check_n_product(4)


@pytest.mark.parametrize("n", [3, 5, 7, 9, 11, 13, 15, 17, 19, 21, 23, 25])
def test_even_half_sign_pattern(n):
    # B = eps * z^((n^2-1)/8): eps = -1 for n = 3, 5 mod 8 and +1 for n = 1, 7 mod 8
    eps = check_even_half_product(n).detail["eps"]
    assert eps == (-1 if n % 8 in (3, 5) else 1)


def test_terminal_square_at_three():
    # the squared terminal term at n = 3 is -3
    from cyclomock.qseries import pochhammer

    z = make_context(3).zeta
    t = -(z * pochhammer(z, z * z, 1))
    assert t * t == -3


@pytest.mark.parametrize("which", LINEAR_IDENTITIES)
@pytest.mark.parametrize("n", ODD)
def test_linear_identities(which, n):
    assert check_linear_identity(which, n).passed


def test_unknown_identity():
    with pytest.raises(ValueError):
        check_linear_identity("nope", 5)


def test_identity_failure_is_reported(monkeypatch):
    import cyclomock.verify as v

    real = v._val

    def skewed(fid, n, j):
        out = real(fid, n, j)
        return out + 1 if fid == "mu" else out

    monkeypatch.setattr(v, "_val", skewed)
    out = check_linear_identity("phi_mu", 7)
    assert not out.passed and out.witness == -1


@pytest.mark.parametrize("n", [1, 3, 9, 15, 21])
def test_galois_and_inversion(n):
    for fid in ("phi", "u", "U1_neg", "sigma_p_neg"):
        assert check_galois(fid, n).passed
    for fid in PRIMED_IDS:
        assert check_inversion(fid, n).passed


def test_galois_rejects_diagnostic():
    with pytest.raises(ValueError):
        check_galois("rho_plain", 7)
    with pytest.raises(ValueError):
        check_inversion("phi", 7)


@pytest.mark.parametrize("n", [7, 9, 11, 25, 45])
def test_margin_consistency(n):
    r = margin_report("phi", n)
    assert abs(r.terminal_modulus**2 - n) < 1e-9
    assert r.terminal_abs_square == n
    assert abs(r.margin - (r.terminal_modulus - r.partial_sum_modulus)) < 1e-12
    # P is the modulus of the sum of all terms before the terminal one
    sums = partial_sums("phi", n)
    assert abs(r.partial_sum_modulus - abs(sums[-2])) < 1e-9
    psi = margin_report("psi", n)
    assert abs(psi.terminal_modulus - math.sqrt(n) / 2) < 1e-12


def test_margin_inputs():
    with pytest.raises(ValueError):
        margin_report("phi", 5)
    with pytest.raises(ValueError):
        margin_report("lambda", 9)
    assert set(MARGIN_IDS) >= {"phi", "psi"}


@pytest.mark.parametrize("which", DISK_RELATIONS)
def test_disk_at_zero(which):
    assert disk_residual(which, 0, 40) == 0


@pytest.mark.parametrize("which", DISK_RELATIONS)
@pytest.mark.parametrize("q", [0.1, 0.3, 0.5, 0.3 + 0.3j, -0.4, 0.6j])
def test_disk_residuals_small(which, q):
    assert disk_residual(which, q, 80) < 1e-10


def test_disk_residual_decreases_with_K():
    # with only a few terms the truncations disagree visibly
    from cyclomock.mocktheta import evaluate_truncated

    q = 0.55
    exact = evaluate_truncated("u", q, 200)
    errs = [abs(evaluate_truncated("u", q, K) - exact) for K in (1, 2, 4, 8)]
    assert errs == sorted(errs, reverse=True)
    assert disk_residual("U0_rel", q, 40) < 1e-10


def test_disk_inputs():
    with pytest.raises(ValueError):
        disk_residual("u_rel", 0.7, 80)
    with pytest.raises(ValueError):
        disk_residual("u_rel", 0.1, 10)
    with pytest.raises(ValueError):
        disk_residual("nope", 0.1, 80)


def test_run_suite_order_and_parallel():
    serial = run_suite("products", [9, 3, 5])
    assert [c.n for c in serial] == [3] * 4 + [5] * 4 + [9] * 4
    par = run_suite("products", [9, 3, 5], jobs=2)
    assert [(c.check_id, c.n, c.passed) for c in par] == [(c.check_id, c.n, c.passed) for c in serial]
    with pytest.raises(ValueError):
        run_suite("nope", [3])
