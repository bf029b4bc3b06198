"""End-to-end smoke tests for the python bindings."""

import pytest

import ledbatsim as ls


def two_flow_scenario():
    sc = ls.Scenario()
    sc.flows = [ls.FlowSpec(0, 0.0), ls.FlowSpec(1, 10.0)]
    sc.duration = 30.0
    return sc


def test_single_flow_tracks_target():
    sc = ls.Scenario()
    sc.flows = [ls.FlowSpec(0, 0.0)]
    sc.duration = 30.0
    tr = ls.run(sc)
    tail = [q for t, q in zip(tr.times, tr.queue) if t >= 10.0]
    mean_q = sum(tail) / len(tail)
    assert 18.0 <= mean_q <= 22.0
    assert ls.efficiency(tr, 10.0, 30.0) >= 0.95


def test_late_comer_unfairness():
    tr = ls.run(two_flow_scenario())
    r0, r1 = ls.per_flow_rates(tr, 20.0, 30.0)
    assert r0 < 0.5 * r1
    assert ls.jain([r0, r1]) < 0.8
    rep = ls.compute_metrics(tr)
    assert rep.jain_long is not None and rep.eta >= 0.95


def test_determinism():
    sc = two_flow_scenario()
    assert ls.run(sc).to_csv() == ls.run(sc).to_csv()


def test_scenario_validation():
    sc = ls.Scenario()
    with pytest.raises(ValueError):
        sc.validate()  # no flows


def test_config_text_round():
    sc = ls.scenario_from_config_text("duration = 5\nflow_starts = 0, 1\n")
    assert sc.duration == 5.0
    assert len(sc.flows) == 2


def test_jain_values():
    assert ls.jain([5.0, 5.0]) == pytest.approx(1.0)
    assert ls.jain([10.0, 0.0]) == pytest.approx(0.5)
    assert ls.jain([0.0, 0.0]) is None


def test_fluid_proposition():
    sys = ls.FluidSystem()
    sys.n_flows = 2
    sys.base_delay_error = [0.0, sys.target_tau]
    sys.windows = [20.0, 25.0]
    sys.queue0 = 20.0
    v = ls.check_proposition(sys, 60.0)
    assert v.applicable and v.holds
    assert v.t_star == pytest.approx(0.5)
    assert v.min_dmax_after > 0.0


def test_staggered_helper():
    sc = ls.staggered_scenario(3, 5.0, ls.Scenario())
    assert [f.start_time for f in sc.flows] == [0.0, 5.0, 10.0]
