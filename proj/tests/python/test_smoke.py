import math

import numpy as np
import pytest

import bayestrust as bt


def test_beta_update_closed_form():
    post = bt.bdtm_update(bt.BetaParams(1.0, 1.0), 10, 7)
    assert (post.alpha, post.beta) == (8.0, 4.0)
    assert post.mean == pytest.approx(8 / 12)
    assert post.variance == pytest.approx(8 * 4 / (12**2 * 13))
    assert bt.advisor_update(post, 0.0, 5, 5) == post


def test_dirichlet_and_discounting():
    post = bt.ddtm_update(bt.DirichletParams([1, 1, 1]), [2, 0, 3])
    assert post.alphas == [3.0, 1.0, 4.0]
    assert sum(post.mean) == pytest.approx(1.0)
    half = bt.discount_evidence(bt.BetaParams(1, 1), 0.5)
    assert half.alpha == 1.0


def test_opinion_bridge():
    o = bt.Opinion(0.5, 0.25, 0.25, 8.0)
    assert bt.opinion_to_dirichlet(o).alphas == pytest.approx([4.0, 2.0, 2.0])
    back = bt.dirichlet_to_opinion(bt.opinion_to_dirichlet(o))
    assert back.belief == pytest.approx(0.5, abs=1e-12)
    p = bt.Opinion(0.1, 0.6, 0.3, 2.0)
    assert bt.fuse(o, p) == bt.fuse(p, o)
    assert bt.projected_trust(bt.Opinion(0, 0, 1, 1)) == 0.5
    with pytest.raises(bt.InvalidParameter):
        bt.Opinion(0.5, 0.5, 0.5, 1.0)


def test_particle_filter_tracks_conjugate_posterior():
    ps = bt.sample_beta(bt.BetaParams(1, 1), 10000, seed=3)
    a, b = 1.0, 1.0
    for k, (n, m) in enumerate([(10, 7), (5, 2), (8, 8)]):
        ps = bt.filter_binary(ps, n, m, seed=k)
        a += m
        b += n - m
    assert abs(ps.mean() - a / (a + b)) < 0.02
    assert len(ps) == 10000
    assert isinstance(ps.values, np.ndarray)
    assert ps.ess() == pytest.approx(10000.0)


def test_forgetting_prediction():
    ps = bt.ParticleSet(np.full(5000, 0.5))
    for k in range(5):
        ps = bt.predict(ps, 0.85, 1e-6, seed=k)
    assert abs(ps.mean() - 0.5 * 0.85**5) < 0.05


def test_expected_utility():
    post = bt.BetaParams(3, 5)
    assert bt.expected_utility(post, lambda t: 2 + 3 * t) == pytest.approx(2 + 3 * 3 / 8, abs=1e-9)


def test_voting_and_committee():
    cfg = bt.SstmConfig()
    ps = bt.sample_beta(bt.BetaParams(1, 1), cfg.particle_count, seed=1)
    for k in range(40):
        ps = bt.sstm_step(ps, 30.0, [20.0, 20.1, 19.9], cfg, seed=k)
    assert ps.mean() < 0.3
    trusts = bt.ipf_estimate([20.0, 20.1, 30.0, 19.9, 20.05], cfg, seed=2)
    assert len(trusts) == 5
    assert min(range(5), key=lambda i: trusts[i]) == 2
    cfg.sensitivity = 0.0
    with pytest.raises(bt.InvalidParameter):
        cfg.validate()


SCENARIO = {
    "horizon": 20,
    "seed": 5,
    "trials": 4,
    "agent.a": "honest",
    "agent.b": "static p=0.8",
    "pair.x": "a b",
}


def test_simulate_and_infer_are_deterministic():
    trace = bt.simulate(SCENARIO)
    assert trace == bt.simulate(SCENARIO)
    assert trace.startswith("#bayestrust-trace")
    rows = bt.infer(trace, {"model": "bdtm"})
    assert len(rows) == 20
    assert rows[-1]["model"] == "bdtm"
    assert rows[-1]["ess"] is None
    assert 0.0 <= rows[-1]["mean"] <= 1.0
    pf = bt.infer(trace, {"model": "gbt-pf", "seed": 1})
    assert pf == bt.infer(trace, {"model": "gbt-pf", "seed": 1})
    assert abs(pf[-1]["mean"] - rows[-1]["mean"]) < 0.05


def test_errors_map_to_python():
    with pytest.raises(bt.ConfigurationError, match="gremlin"):
        bt.simulate({**SCENARIO, "agent.b": "gremlin"})
    with pytest.raises(bt.TraceFormatError):
        bt.infer("not a trace\n", {"model": "bdtm"})
    with pytest.raises(ValueError):
        bt.bdtm_update(bt.BetaParams(), 3, 5)


def test_cli_entry_point():
    code, out, err = bt.run_cli(["infer", "--model", "nope", "--trace", "x"])
    assert code == 2
    assert "nope" in err
    assert bt.run_cli(["--help"])[0] == 0
