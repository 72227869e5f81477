import json
import logging
from fractions import Fraction

import pytest

from cyclomock.mocktheta import MAIN_IDS
from cyclomock.scan import (
    CoercionFailure,
    ParseError,
    ScanRecord,
    SumRecord,
    completed,
    decode_coeffs,
    encode_coeffs,
    odd_primes,
    persist,
    prime_sum_search,
    resume,
    root_sum,
    root_sum_naive,
    scan_nonvanishing,
)


def test_encoding_round_trip():
    cs = (Fraction(0), Fraction(-3, 2), Fraction(7))
    assert encode_coeffs(cs) == "0/1,-3/2,7/1"
    assert decode_coeffs(encode_coeffs(cs)) == cs
    assert decode_coeffs("") == ()


def test_scan_phi_small():
    recs = scan_nonvanishing({"phi"}, 1, 11)
    assert [r.n for r in recs] == [1, 3, 5, 7, 9, 11]
    assert not any(r.is_zero for r in recs)
    assert recs[1].value == (0, -2)


def test_scan_all_at_one():
    recs = scan_nonvanishing(MAIN_IDS, 1, 1)
    assert len(recs) == 23
    assert not any(r.is_zero or r.error for r in recs)
    assert [r.function for r in recs] == sorted(MAIN_IDS)


def test_scan_inputs():
    with pytest.raises(ValueError):
        scan_nonvanishing({"phi"}, 2, 11)
    with pytest.raises(ValueError):
        scan_nonvanishing({"phi"}, 11, 3)
    with pytest.raises(ValueError):
        scan_nonvanishing({"rho_plain"}, 1, 3)


def test_scan_records_errors_without_aborting(monkeypatch):
    import cyclomock.scan as scan
    from cyclomock.qseries import NonTerminating

    real = scan.evaluate_at_root

    def flaky(fid, n, j=1, cap=None):
        if n == 5:
            raise NonTerminating(cap)
        return real(fid, n, j, cap)

    monkeypatch.setattr(scan, "evaluate_at_root", flaky)
    recs = scan_nonvanishing({"phi"}, 3, 7)
    assert [r.error is not None for r in recs] == [False, True, False]
    assert "NonTerminating" in recs[1].error


def test_scan_margins():
    recs = scan_nonvanishing({"phi", "mu"}, 5, 9, with_margin=True)
    by = {(r.function, r.n): r for r in recs}
    assert by[("phi", 5)].margin is None
    assert by[("mu", 9)].margin is None
    assert by[("phi", 9)].margin is not None


def test_scan_deterministic_and_parallel():
    a = scan_nonvanishing({"phi", "psi", "u"}, 1, 31)
    b = scan_nonvanishing({"phi", "psi", "u"}, 1, 31, jobs=3)
    strip = lambda rs: [{**r.to_json(), "elapsed_ms": 0} for r in rs]  # noqa: E731
    assert strip(a) == strip(b)


@pytest.mark.parametrize("fid", MAIN_IDS)
@pytest.mark.parametrize("n", [1, 3, 5, 9, 15])
def test_root_sum_trace_equals_naive(fid, n):
    assert root_sum(fid, n).value == root_sum_naive(fid, n)


def test_root_sum_examples():
    assert root_sum("phi", 5).value == 0
    assert root_sum("sigma_neg", 5).value == 0
    assert root_sum("phi", 3).value == 3
    assert root_sum("sigma_neg", 3).value == Fraction(-3, 2)
    assert root_sum("phi", 7).value == 14


def test_root_sum_inputs():
    with pytest.raises(ValueError):
        root_sum("phi", 4)
    with pytest.raises(ValueError):
        root_sum("rho_plain", 3)


def test_root_sum_coercion_failure(monkeypatch):
    import cyclomock.scan as scan

    def bad_trace(_):
        raise ArithmeticError("not rational")

    monkeypatch.setattr(scan, "trace", bad_trace)
    with pytest.raises(CoercionFailure):
        root_sum("phi", 7)


def test_odd_primes():
    assert odd_primes(2) == []
    assert odd_primes(31) == [3, 5, 7, 11, 13, 17, 19, 23, 29, 31]


def test_prime_search():
    with pytest.raises(ValueError):
        prime_sum_search({"phi"}, 2)
    vanishing, table = prime_sum_search({"phi"}, 3)
    assert vanishing == []
    assert [(r.function, r.n, r.value) for r in table] == [("phi", 3, 3)]
    vanishing, _ = prime_sum_search({"phi", "sigma_neg"}, 11)
    found = {r.n for r in vanishing}
    assert 5 in found and not found & {3, 7}


def test_prime_sum_pattern_regression():
    # frozen from exact computation: both sums vanish exactly when p = 2 mod 3
    _, table = prime_sum_search({"phi", "sigma_neg"}, 61)
    for r in table:
        if r.n % 3 == 2:
            assert r.value == 0
        elif r.n > 3:
            assert r.value == (2 * r.n if r.function == "phi" else -r.n)


# -- persistence ------------------------------------------------------------

def _records():
    recs = scan_nonvanishing({"phi", "sigma_neg"}, 1, 9)
    return recs + [SumRecord("phi", 5, Fraction(0)), SumRecord("sigma_neg", 3, Fraction(-3, 2))]


def test_persist_resume_round_trip(tmp_path):
    path = tmp_path / "log.records"
    recs = _records()
    assert len(recs) == 12
    persist(recs, path)
    assert resume(path) == recs
    for line in path.read_text().splitlines():
        d = json.loads(line)
        assert d["schema"] == 1


def test_resume_empty_and_missing(tmp_path):
    assert resume(tmp_path / "absent") == []
    (tmp_path / "empty").write_text("")
    assert resume(tmp_path / "empty") == []
    assert completed(tmp_path / "empty") == set()


def test_resume_malformed_line(tmp_path):
    path = tmp_path / "bad.records"
    persist(_records()[:3], path)
    with open(path, "a") as fh:
        fh.write('{"schema":1,"fn":"phi"}\n')
        fh.write(path.read_text().splitlines()[0] + "\n")
    with pytest.raises(ParseError) as exc:
        resume(path)
    assert exc.value.line == 4


def test_resume_wrong_schema(tmp_path):
    path = tmp_path / "bad.records"
    path.write_text('{"schema":2,"fn":"phi","n":5,"sum":"0/1"}\n')
    with pytest.raises(ParseError):
        resume(path)
    path.write_text("not json\n")
    with pytest.raises(ParseError):
        resume(path)


def test_resume_partial_trailing_line(tmp_path, caplog):
    path = tmp_path / "torn.records"
    recs = _records()[:4]
    persist(recs, path)
    with open(path, "a") as fh:
        fh.write('{"schema":1,"fn":"ph')
    with caplog.at_level(logging.WARNING):
        assert resume(path) == recs
    assert "partial trailing line" in caplog.text


def test_resume_correctness(tmp_path):
    ids = {"phi", "psi", "u"}
    full = scan_nonvanishing(ids, 1, 21)
    path = tmp_path / "scan.records"
    persist(scan_nonvanishing(ids, 1, 11), path)
    done = completed(path)
    persist(scan_nonvanishing(ids, 1, 21, skip=done), path)
    strip = lambda rs: [{**r.to_json(), "elapsed_ms": 0} for r in rs]  # noqa: E731
    assert strip(resume(path)) == strip(full)


def test_scan_record_keys():
    r = ScanRecord("phi", 3, 1, False, 1, (Fraction(0), Fraction(-2)), 0)
    assert set(r.to_json()) == {"schema", "fn", "n", "j", "is_zero", "terminated_at", "value", "elapsed_ms"}
