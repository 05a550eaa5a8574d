import random

import pytest

from conftest import FIG3, MATRIX_A, chain, ring
from mechcat.canon import canonical_form, is_canonical
from mechcat.core import C, ClassSignature, R, S, decode_index, parse_matrix
from mechcat.genmatrix import Shard
from mechcat.pipeline import (
    NUMERIC_ORDER,
    ORDER,
    Candidate,
    PipelineConfig,
    RunStats,
    apply_filters,
    criteria_order,
    run,
    run_shard,
    summarize,
    summary_total,
    vector_stages,
    worker_count,
)

TABLE1 = [
    ("R^2CS", 18), ("R^2S^2", 3), ("RPCS", 36), ("RPS^2", 6),
    ("RC^3", 6), ("P^2CS", 18), ("P^2S^2", 3), ("PC^3", 6),
]
TABLE3 = [("R^3", 1), ("R^2P", 3), ("RP^2", 3), ("P^3", 1)]
TABLE4 = [("R^4", 1), ("R^3P", 4), ("R^2P^2", 6), ("RP^3", 4)]


def test_order_lists():
    assert set(ORDER) == set(NUMERIC_ORDER)
    assert ORDER[-1] == NUMERIC_ORDER[-1] == "jacobian-rank"
    assert vector_stages("kutzbach") == ("isolated-link", "has-rp", "dof-range", "rp-count")
    assert "dof-range" not in vector_stages("numeric")
    assert criteria_order("numeric") == NUMERIC_ORDER


def test_config_validation():
    assert PipelineConfig(links=(5, 3, 3)).links == (3, 5)
    for bad in (dict(links=(7,)), dict(target_dof=0), dict(dof_mode="x"), dict(trials=0), dict(shards=0)):
        with pytest.raises(ValueError):
            PipelineConfig(**bad)


def test_config_hash():
    base = PipelineConfig(links=(4,), target_dof=2)
    assert base.criteria_hash == PipelineConfig(links=(4,), target_dof=2, shards=8, workers=3).criteria_hash
    assert base.criteria_hash != PipelineConfig(links=(4,), target_dof=3).criteria_hash
    assert base.criteria_hash != PipelineConfig(links=(4,), target_dof=2, rank_tol=1e-7).criteria_hash
    assert len(base.criteria_hash) == 16


def test_matrix_a_fails_isolated():
    trace = apply_filters(parse_matrix(MATRIX_A), PipelineConfig(links=(5,), target_dof=1))
    assert trace.first_failure == "isolated-link"
    assert trace.verdicts == (("isolated-link", False),)


def test_serial_rrr_accepted():
    cfg = PipelineConfig(target_dof=3)
    # 0-1-2-3 is not the minimal labelling of the chain; its canonical image is
    natural = apply_filters(chain(R, R, R), cfg, full=True)
    assert natural.first_failure == "iso-canonical"
    assert [c for c, ok in natural.verdicts if not ok] == ["iso-canonical"]
    trace = apply_filters(canonical_form(chain(R, R, R)), cfg, full=True)
    assert trace.accepted
    assert [c for c, _ in trace.verdicts] == list(ORDER)


def test_cccs_fails_has_rp():
    assert apply_filters(ring(C, C, C, S), PipelineConfig(target_dof=1)).first_failure == "has-rp"


def test_full_trace_keeps_going():
    trace = apply_filters(parse_matrix(MATRIX_A), PipelineConfig(links=(5,), target_dof=1), full=True)
    assert len(trace.verdicts) == len(ORDER)
    assert trace.first_failure == "isolated-link"


def test_fig3_fails_late():
    trace = apply_filters(FIG3, PipelineConfig(links=(5,), target_dof=2), full=True)
    verdicts = dict(trace.verdicts)
    assert not verdicts["jacobian-rank"]
    assert verdicts["dof-range"] and verdicts["rp-count"]


def test_table1(table1_run):
    entries, stats = table1_run
    assert summarize(entries) == TABLE1
    assert stats.accepted == 96 and stats.generated == 15_625
    assert stats.consistent()


def test_table3(table3_run):
    entries, stats = table3_run
    assert summarize(entries) == TABLE3
    assert stats.generated == 125 + 15_625 + 9_765_625 and stats.consistent()


def test_table4(table4_run):
    entries, stats = table4_run
    assert summarize(entries) == TABLE4
    assert summary_total(summarize(entries)) == 15


def test_entries_sorted_canonical_and_recheck(table1_run, table3_run):
    for entries, dof in ((table1_run[0], 1), (table3_run[0], 3)):
        assert [e.sort_key for e in entries] == sorted(e.sort_key for e in entries)
        for e in entries:
            assert is_canonical(e.matrix) and e.dof == dof
            cfg = PipelineConfig(links=(e.links,), target_dof=dof)
            cand = Candidate(e.canonical_index, e.matrix, cfg)
            for crit in ORDER:
                assert cand.check(crit), (crit, e.matrix)


@pytest.mark.parametrize("dof", [1, 2])
def test_filter_order_robustness(dof):
    cfg = PipelineConfig(links=(4,), target_dof=dof)
    rng = random.Random(dof)
    orders = [ORDER, tuple(reversed(ORDER))]
    o = list(ORDER)
    rng.shuffle(o)
    orders.append(tuple(o))
    results = []
    for order in orders:
        acc = {k for k in range(15_625) if apply_filters(decode_index(4, k), cfg, k, order=order).accepted}
        results.append(acc)
    assert all(r == results[0] for r in results)
    run_set = {e.canonical_index for e in run(cfg)[0]}
    assert run_set == results[0]


def test_shard_invariance(table1_run):
    entries, _ = run(PipelineConfig(links=(4,), target_dof=1, shards=8))
    assert entries == table1_run[0]
    pieces = [run_shard(4, Shard(s, 3), PipelineConfig(links=(4,), target_dof=1))[0] for s in range(3)]
    merged = sorted((e for p in pieces for e in p), key=lambda e: e.sort_key)
    assert merged == table1_run[0]


def test_process_pool_matches_serial(table1_run):
    entries, stats = run(PipelineConfig(links=(4,), target_dof=1, shards=2, workers=2))
    assert entries == table1_run[0]
    assert stats.accepted == 96 and stats.consistent()


def test_thread_env_override(monkeypatch):
    cfg = PipelineConfig(workers=3)
    monkeypatch.delenv("MECHCAT_THREADS", raising=False)
    assert worker_count(cfg) == 3
    monkeypatch.setenv("MECHCAT_THREADS", "1")
    assert worker_count(cfg) == 1


def test_trace_collection():
    cfg = PipelineConfig(links=(3,), target_dof=2, collect_traces=True)
    entries, stats, traces = run_shard(3, Shard(), cfg)
    scalar = stats.generated - sum(stats.rejected_by.get(c, 0) for c in vector_stages("kutzbach"))
    assert len(traces) == scalar
    assert all(len(t.verdicts) == len(ORDER) - 4 for t in traces)
    assert {t.matrix_index for t in traces if t.accepted} == {e.canonical_index for e in entries}


def test_numeric_mode_reports():
    entries, stats = run(PipelineConfig(links=(3, 4), target_dof=1, dof_mode="numeric"))
    assert stats.consistent()
    assert all(e.dof == 1 for e in entries)
    # Kutzbach table entries are generically 1-DOF, so they survive numeric mode too
    kutz = {e.canonical_index for e in run(PipelineConfig(links=(4,), target_dof=1))[0]}
    assert kutz <= {e.canonical_index for e in entries if e.links == 4}


def test_stats_merge_and_lines():
    a = RunStats(generated=5, accepted=1)
    a.reject("has-rp", 4)
    b = RunStats(generated=3, accepted=0)
    b.reject("has-rp", 1)
    b.reject("s-s-cut", 2)
    a.merge(b)
    assert a.consistent() and a.rejected_by == {"has-rp": 5, "s-s-cut": 2}
    assert "accepted: 1" in a.lines()
    a.reject("dof-range", 0)
    assert "dof-range" not in a.rejected_by


def test_summarize_order_and_empty():
    assert summarize([]) == []
    assert summary_total([]) == 0
    sigs = [ClassSignature(0, 2), ClassSignature(2), ClassSignature(1, 1)]
    assert [s.label for s in sorted(sigs, key=ClassSignature.sort_key)] == ["R^2", "RP", "P^2"]
