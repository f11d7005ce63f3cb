import pytest

from currentcoh import catalog
from currentcoh import current as cu
from currentcoh import verify as ver


def test_targets_and_aliases():
    for alias, target in ver.ALIASES.items():
        assert target in ver.TARGETS
    with pytest.raises(ValueError):
        ver.run("nonsense")
    with pytest.raises(ValueError):
        ver.run("all", ["oscillator"])
    with pytest.raises(ValueError):
        ver.run("main-sequence", ["dual_numbers"])


def test_threads_env(monkeypatch):
    monkeypatch.setenv("CURRENTCOH_THREADS", "3")
    assert ver.threads() == 3
    monkeypatch.setenv("CURRENTCOH_THREADS", "x")
    assert ver.threads() == 1


def test_sampler_mixes_verdicts():
    cur = cu.build_current(catalog.dual_numbers(), catalog.oscillator())
    samples = ver.sample_triples(cur, 40, seed=5)
    verdicts = {cu.is_cocycle_brute(cur, f) for f in samples}
    assert len(samples) == 40 and verdicts == {True, False}


def test_parallel_matches_serial(monkeypatch):
    pairs = [("dual_numbers", "heisenberg"), ("field", "sl2")]
    serial = ver.verify_main_sequence(pairs)
    monkeypatch.setenv("CURRENTCOH_THREADS", "2")
    par = ver.verify_main_sequence(pairs)
    assert serial.checks == par.checks and serial.ok


def test_guard_reports_failures():
    def boom():
        raise ver.StructureError("nope")
    c = ver._guarded("x", boom)
    assert not c.passed and "nope" in c.detail


def test_full_battery_passes():
    suites = ver.run("all")
    assert [s.target for s in suites] == list(ver.TARGETS[:-1])
    bad = [c for s in suites for c in s.checks if not c.passed]
    assert not bad, bad
