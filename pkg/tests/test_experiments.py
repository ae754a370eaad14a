import csv
import io
import json
import math

import pytest

from siegelmodp import experiments as X
from siegelmodp import ringmodp as R
from siegelmodp.genforms import GeneratorCache
from siegelmodp.qexp import linear_combine


def test_alpha_record():
    r = X.AlphaRecord(*X.alpha(6, 42, 5))
    assert r.key == (6, 18, 3, 0) and not r.bold
    z = X.AlphaRecord(*X.alpha(math.inf, 42, 5))
    assert z.key == (math.inf, 0, 0, 4)
    assert X.AlphaRecord(*X.alpha(6, 48, 5)).bold


def test_table_aop_rows(gc):
    t5 = X.table_aop(5, 18, gc)
    assert X.records_as_tuples(t5.row(4)) == [(7, 0, 0, 4, 1)]
    assert X.records_as_tuples(t5.row(18)) == [(6, 18, 3, 0, 2), (math.inf, 0, 0, 4, 2)]
    t7 = X.table_aop(7, 24, gc, kmin=24)
    assert (8, 24, 3, 5, 1) in X.records_as_tuples(t7.row(24))
    assert [r for r in t7.row(24) if r.bold][0].key == (8, 24, 3, 5)


def test_table_aop_rejects_other_primes(gc):
    with pytest.raises(ValueError):
        X.table_aop(11, 10, gc)


@pytest.mark.parametrize("p,k", [(5, 24), (5, 30), (7, 28)])
def test_multiset_invariant_under_basis_change(gc, p, k):
    base = X.table_aop(p, k, gc, kmin=k).rows
    for seed in (1, 2):
        assert X.table_aop(p, k, gc, kmin=k, mix_seed=seed).rows == base


def test_golden_files_consistent():
    for p in (5, 7):
        g = X.golden_aop(p)
        assert sorted(g) == list(range(4, 61, 2))
        for k, recs in g.items():
            assert sum(r[4] for r in recs) == R.dim(k)
    rows = X.load_golden("kernel_rows")
    assert rows["73"] == [0] and rows["23"] == [0, 12, 35, 58, 92]
    assert len(X.load_golden("violations")) == 19


def test_render_formats(gc):
    t = X.table_aop(5, 12, gc)
    text = X.render_aop(t)
    assert "  10 | [(4, 18, 3, 0), 1], [(inf, 0, 0, 4), 1]" in text
    rows = list(csv.DictReader(io.StringIO(X.render_aop(t, "csv"))))
    assert rows[-1]["ord"] == "inf"
    doc = json.loads(X.render_aop(t, "json"))
    assert doc["rows"][0]["records"][0]["ord"] == 7


def test_cold_and_warm_cache_identical(tmp_path):
    cold = GeneratorCache(4, tmp_path)
    a = X.render_aop(X.table_aop(5, 10, cold))
    warm = GeneratorCache(4, tmp_path)
    b = X.render_aop(X.table_aop(5, 10, warm))
    assert a == b
    assert warm.path("X12").exists()


def test_kernel_row_and_violations(gc):
    t = X.table_theta_kernel(kmax=100, cap=15, gens_cache=gc, primes=[79])
    assert t.row(79) == [0, 40]
    assert t.violations == []
    skipped = [c for c in t.cells if c.skipped]
    assert skipped and all(R.sturm_bound(c.k + 80) > 15 for c in skipped)
    assert all(R.sturm_bound(c.k + 80) <= 15 for c in t.cells if not c.skipped)
    assert X.is_violation(5, 24) and not X.is_violation(5, 18) and not X.is_violation(7, 4)


def test_rescaled_x35_keeps_rows(gc, tmp_path):
    other = GeneratorCache(16, tmp_path, persist=False)
    for n in ("E4", "E6", "X10", "X12"):
        other.set_form(n, gc[n])
    other.set_form("X35", linear_combine([(3, gc["X35"])]))
    base = X.kernel_row(31, 60, 15, gc)
    again = X.kernel_row(31, 60, 15, other)
    assert [c.appears for c in base] == [c.appears for c in again]
    assert [c.k for c in base if c.appears] == [0, 16, 47]


def test_audit(gc):
    t = X.table_theta_kernel(kmax=30, cap=15, gens_cache=gc, primes=[5, 7])
    entries = {(e.p, e.weight): e for e in X.audit_conjecture(t, gc)}
    assert entries[7, 4].type == "c" and entries[7, 4].status == "hold"
    assert entries[5, 24].status == "violate"
    assert entries[5, 0].status == "hold"
    assert all(e.status == "hold" for (p, w), e in entries.items() if not X.is_violation(p, w))


def test_verify_gates(gc):
    checks = X.verify("gates", gc)
    assert checks and all(c.passed for c in checks), [c for c in checks if not c.passed]
    with pytest.raises(ValueError):
        X.verify("nope", gc)
