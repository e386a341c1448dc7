"""Oracle environment contracts and advantage estimation."""

import pytest
import scipy.stats

from bdga.errors import (
    InstanceNotAcceptedError,
    InstanceReusedError,
    TestUnavailableError,
)
from bdga.experiments import (
    make_cheating_distinguisher,
    make_env_factory,
    make_exhaustive_search_distinguisher,
    make_null_distinguisher,
)
from bdga.harness import OracleEnv, derive_seed, estimate_advantage, wilson_half_width
from bdga.platforms import preset

BD = preset("bd23")
S4 = preset("s4_conj")

TRIO = [("U1", 0), ("U2", 0), ("U3", 0)]


def test_execute_returns_independent_transcripts():
    env = OracleEnv(S4, 42)
    t1 = env.execute(TRIO)
    t2 = env.execute([("U1", 1), ("U2", 1), ("U3", 1)])
    assert t1.sid != t2.sid
    assert env.q_ex == 2
    assert len(t1.v) + len(t1.w) + len(t1.z) == 9


def test_execute_refuses_reused_instances():
    env = OracleEnv(S4, 42)
    env.execute(TRIO)
    with pytest.raises(InstanceReusedError):
        env.execute([("U1", 0), ("U4", 0), ("U5", 0)])


def test_instances_share_sid_pid_and_key():
    env = OracleEnv(S4, 1)
    transcript = env.execute(TRIO)
    recs = [env.record(u, i) for u, i in TRIO]
    assert len({r.sid for r in recs}) == 1 and recs[0].sid == transcript.sid
    assert len({r.sk.payload for r in recs}) == 1
    assert len({r.pid for r in recs}) == 1
    assert all(r.acc and r.term and r.used for r in recs)


def test_test_oracle_honest_bit_returns_the_key():
    for seed in range(20):
        env = OracleEnv(BD, seed)
        if env.hidden_bit != 1:
            continue
        env.execute(TRIO)
        assert env.test("U1", 0) == env.record("U1", 0).sk


def test_test_oracle_random_bit_is_uniform():
    counts = {p: 0 for p in BD.target.elements_p()}
    drawn = 0
    seed = 0
    while drawn < 4000:
        env = OracleEnv(BD, seed)
        seed += 1
        if env.hidden_bit != 0:
            continue
        env.execute(TRIO)
        counts[env.test("U1", 0).payload] += 1
        drawn += 1
    _, pvalue = scipy.stats.chisquare(list(counts.values()))
    assert pvalue > 1e-4


def test_test_oracle_contracts():
    env = OracleEnv(S4, 3)
    with pytest.raises(InstanceNotAcceptedError):
        env.test("U1", 0)  # nothing executed yet
    env.execute(TRIO)
    with pytest.raises(InstanceNotAcceptedError):
        env.test("U9", 0)
    env.test("U1", 0)
    with pytest.raises(TestUnavailableError):
        env.test("U1", 0)
    with pytest.raises(TestUnavailableError):
        env.test("U2", 0)


def test_wilson_half_width_shrinks():
    assert wilson_half_width(50, 100) > wilson_half_width(500, 1000)
    assert 0.0 < wilson_half_width(500, 1000) < 0.05


def test_null_distinguisher_has_no_advantage():
    report = estimate_advantage(
        make_null_distinguisher(BD, seed=5), make_env_factory(BD, 6), 2000
    )
    assert report.advantage <= 3.0 / 2000**0.5
    assert report.trials == 2000
    assert report.q_ex == 2000


def test_cheating_distinguisher_has_full_advantage():
    report = estimate_advantage(make_cheating_distinguisher(), make_env_factory(BD, 7), 400)
    assert report.advantage == 1.0


def test_exhaustive_search_breaks_toy_parameters():
    report = estimate_advantage(
        make_exhaustive_search_distinguisher(BD), make_env_factory(BD, 8), 400
    )
    # expected advantage 10/11: perfect when the bit is 1, and a 1/11 false
    # positive rate when the substituted key happens to collide
    assert report.advantage >= 0.85


def test_fake_keys_neutralize_the_search_attack():
    report = estimate_advantage(
        make_exhaustive_search_distinguisher(BD),
        make_env_factory(BD, 9, fake_keys=True),
        1500,
    )
    assert report.advantage <= 3.0 / 1500**0.5


def test_contract_violation_counts_as_failure():
    def rude(env):
        env.execute(TRIO)
        env.execute(TRIO)  # reuse: aborts the trial
        return 1

    report = estimate_advantage(rude, make_env_factory(BD, 10), 50)
    assert report.successes == 0
    assert report.advantage == 1.0  # |2*0 - 1|: always-wrong is detectable


def test_never_calling_test_cannot_succeed():
    report = estimate_advantage(lambda env: 1, make_env_factory(BD, 11), 50)
    assert report.successes == 0


def test_report_json_fields():
    report = estimate_advantage(
        make_null_distinguisher(BD, seed=1), make_env_factory(BD, 12), 100
    )
    obj = report.to_obj()
    assert set(obj) == {"trials", "successes", "advantage", "ci95", "q_ex"}


def test_derive_seed_is_stable_and_separated():
    assert derive_seed(1, "a", 0) == derive_seed(1, "a", 0)
    assert derive_seed(1, "a", 0) != derive_seed(1, "a", 1)
    assert derive_seed(1, "a", 0) != derive_seed(2, "a", 0)
