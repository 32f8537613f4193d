import json

import pytest

from stampbase.basis import Basis, PreconditionError, basis_range
from stampbase.extension import is_extensible
from stampbase.search import (
    BasisDFS,
    BudgetExceededError,
    classify,
    classify_basis,
    enumerate_p_bases,
    iter_p_bases,
    iter_p_plus,
    load_checkpoint,
    maxima_record,
    plus_depth_search,
    range_comparison_stats,
    run_enumeration,
    subtree_prefixes,
    tail_distribution,
    _subtree_dfs,
)
from stampbase.symmetric import is_symmetricisable_plus

from frozen import CENSUS, CLASSIFICATION, RANGE_COMPARISON
from oracles import naive_p_bases


@pytest.mark.parametrize("p", range(3, 11))
def test_census_counts(p):
    assert enumerate_p_bases(p) == CENSUS[p]


@pytest.mark.parametrize("p", range(3, 7))
def test_pruned_search_equals_naive(p):
    pruned = [b.elements for b in iter_p_bases(p)]
    assert pruned == naive_p_bases(p)


def test_iteration_is_lexicographic():
    seen = [b.elements for b in iter_p_bases(8)]
    assert seen == sorted(seen)
    assert len(set(seen)) == len(seen)


@pytest.mark.parametrize("p", range(5, 11))
def test_classification_counts(p, classified):
    n_p = len(classified[p])
    n_e = sum(r.extensible for r in classified[p])
    n_s = sum(r.symmetricisable for r in classified[p])
    assert (n_p, n_e, n_s) == CLASSIFICATION[p]
    stats = classify(p)
    assert (stats.n_p, stats.n_e, stats.n_s) == CLASSIFICATION[p]


def test_classify_threads_agree():
    solo = classify(8, threads=1)
    pooled = classify(8, threads=2)
    assert (solo.n_p, solo.n_e, solo.n_s) == (pooled.n_p, pooled.n_e, pooled.n_s)


@pytest.mark.parametrize("p", range(3, 11))
def test_range_comparison(p):
    stats = range_comparison_stats(p)
    assert (stats.below, stats.equal, stats.above) == RANGE_COMPARISON[p]
    assert stats.below + stats.equal + stats.above == CENSUS[p]


def test_subtree_prefixes_partition_the_search():
    p, total = 8, 7
    whole = [b.elements for b in iter_p_bases(p)]
    for depth in (1, 2, 3):
        merged = []
        for prefix in subtree_prefixes(p, total, p - 1, depth):
            merged.extend(_subtree_dfs(p, total, p - 1, prefix))
        assert merged == whole


def test_state_restore_resumes_mid_iteration():
    dfs = BasisDFS(9, 8)
    head = [next(dfs) for _ in range(10)]
    resumed = BasisDFS(9, 8, state=dfs.state())
    assert list(resumed) == list(dfs)
    assert head[0] is not None


def test_budget_abort_reports_node_counts():
    with pytest.raises(BudgetExceededError) as err:
        enumerate_p_bases(10, node_budget=50)
    assert err.value.budget == 50
    assert err.value.visited == 51


def test_classify_basis_agrees_with_fast_path(classified):
    for rec in classified[7]:
        slow = classify_basis(rec.basis, 7)
        assert slow.extensible == rec.extensible
        assert slow.symmetricisable == rec.symmetricisable


def test_plus_records():
    records = list(iter_p_plus(6))
    assert len(records) == 15
    for rec in records:
        assert rec.basis.k == 6
        assert rec.comparison_tail == rec.basis.tail - 6
        assert basis_range(rec.basis).admissible
        assert rec.extensible == is_extensible(rec.basis, 6).extensible
        if rec.extensible:
            verdict = is_symmetricisable_plus(rec.basis, 6)
            assert rec.symmetricisable == verdict.symmetricisable
        else:
            assert not rec.symmetricisable


def test_plus_depth_search():
    result = plus_depth_search(8, 1)
    assert result.max_tail == 13
    assert len(result.records) == 49
    assert all(r.symmetricisable for r in result.records)
    with pytest.raises(PreconditionError):
        plus_depth_search(8, 0)


def test_plus_depth_search_budget_keeps_partial_results():
    with pytest.raises(BudgetExceededError) as err:
        plus_depth_search(10, 2, node_budget=500)
    partial = err.value.partial
    assert err.value.visited == 501
    assert partial.p == 10 and partial.depth == 2
    assert partial.max_tail == 15
    assert len(partial.records) == 238


def test_tail_distribution():
    dist = tail_distribution(8)
    assert dist.rows == (
        (7, 1, 1, 1),
        (8, 0, 0, 0),
        (9, 0, 0, 0),
        (10, 1, 1, 1),
        (11, 1, 1, 1),
        (12, 3, 1, 1),
        (13, 3, 0, 0),
        (14, 3, 0, 0),
        (15, 4, 0, 0),
    )
    assert sum(r[1] for r in dist.rows) == CENSUS[8]


@pytest.mark.parametrize("p, v1, v2", [(5, 7, 4), (10, 26, 19), (12, 35, 23)])
def test_maxima_record(p, v1, v2):
    rec = maxima_record(p)
    assert (rec.v1, rec.v2) == (v1, v2)
    assert rec.ratio_v1 == pytest.approx(v1 / p)
    assert rec.ratio_v2 == pytest.approx(v2 / v1)


def test_run_enumeration_output(tmp_path):
    out = tmp_path / "p7.jsonl"
    summary = run_enumeration(7, classify_records=True, out_path=str(out))
    assert summary == {"p": 7, "mode": "plain", "n_p": 6, "n_e": 2, "n_s": 2}
    lines = out.read_text().splitlines()
    assert len(lines) == 6
    first = json.loads(lines[0])
    assert set(first) == {"p", "basis", "tail", "extensible", "symmetricisable"}


def test_run_enumeration_threads_byte_identical(tmp_path):
    solo = tmp_path / "solo.jsonl"
    pooled = tmp_path / "pooled.jsonl"
    run_enumeration(8, classify_records=True, out_path=str(solo))
    run_enumeration(8, classify_records=True, out_path=str(pooled), threads=2)
    assert solo.read_bytes() == pooled.read_bytes()


def test_run_enumeration_plus_mode(tmp_path):
    out = tmp_path / "p6plus.jsonl"
    summary = run_enumeration(6, mode="plus", out_path=str(out))
    assert summary["n_plus"] == 15
    rec = json.loads(out.read_text().splitlines()[0])
    assert len(rec["basis"]) == 6


def test_checkpoint_resume_byte_identical(tmp_path):
    reference = tmp_path / "ref.jsonl"
    run_enumeration(10, classify_records=True, out_path=str(reference))

    out = tmp_path / "resumed.jsonl"
    ckpt = tmp_path / "ckpt.json"
    with pytest.raises(BudgetExceededError):
        run_enumeration(
            10,
            classify_records=True,
            out_path=str(out),
            checkpoint_path=str(ckpt),
            checkpoint_every=20,
            node_budget=300,
        )
    assert ckpt.exists()
    saved = load_checkpoint(str(ckpt))
    assert saved["p"] == 10 and saved["partial_stats"]["count"] > 0

    run_enumeration(
        10,
        classify_records=True,
        out_path=str(out),
        checkpoint_path=str(ckpt),
        resume=True,
        checkpoint_every=20,
    )
    assert out.read_bytes() == reference.read_bytes()
    # completion removes the recovery point so it cannot replay later
    assert not ckpt.exists()


def test_checkpoint_guards(tmp_path):
    with pytest.raises(PreconditionError):
        run_enumeration(7, resume=True)
    with pytest.raises(PreconditionError):
        run_enumeration(
            7,
            out_path=str(tmp_path / "x.jsonl"),
            checkpoint_path=str(tmp_path / "c.json"),
            threads=2,
        )
    with pytest.raises(PreconditionError):
        run_enumeration(
            7,
            resume=True,
            out_path=str(tmp_path / "x.jsonl"),
            checkpoint_path=str(tmp_path / "missing.json"),
        )


def test_checkpoint_rejects_mismatched_run(tmp_path):
    out = tmp_path / "p8.jsonl"
    ckpt = tmp_path / "p8.ckpt"
    with pytest.raises(BudgetExceededError):
        run_enumeration(
            8,
            classify_records=True,
            out_path=str(out),
            checkpoint_path=str(ckpt),
            checkpoint_every=10,
            node_budget=60,
        )
    with pytest.raises(PreconditionError):
        run_enumeration(
            7,
            classify_records=True,
            out_path=str(out),
            checkpoint_path=str(ckpt),
            resume=True,
        )
    with pytest.raises(PreconditionError):
        run_enumeration(
            8,
            classify_records=False,
            out_path=str(out),
            checkpoint_path=str(ckpt),
            resume=True,
        )
