import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qrough import AlarmPolicy, ThreatTracker, alarm, choose_p
from qrough.threat import threat_series

areas_st = st.lists(st.integers(0, 10_000), min_size=1, max_size=120)


@pytest.mark.parametrize("fps, p", [(30, 30), (0.5, 1), (24, 24), (29.97, 30), (12.5, 13)])
def test_choose_p(fps, p):
    assert choose_p(fps) == p


@pytest.mark.parametrize("fps", [0, -1])
def test_choose_p_rejects(fps):
    with pytest.raises(ValueError):
        choose_p(fps)


def test_constant_sequence():
    r = threat_series([100] * 60, 30)[-1]
    assert (r.f_mu, r.f_mu_p, r.threat) == (100, 100, 0)


def test_step_up():
    r = threat_series([100] * 30 + [300] * 30, 30)[-1]
    assert r.f_mu == 200 and r.f_mu_p == 300
    assert r.threat == pytest.approx(0.5, abs=1e-9)


def test_step_down():
    r = threat_series([300] * 30 + [100] * 30, 30)[-1]
    assert r.threat == pytest.approx(-0.5, abs=1e-9)


def test_early_frames_use_available_window():
    rs = threat_series([10, 20, 30], 5)
    assert [r.f_mu_p for r in rs] == [10, 15, 20]
    assert all(r.threat == 0 for r in rs)


def test_negative_area_rejected():
    with pytest.raises(ValueError):
        ThreatTracker(3).update(-1)
    with pytest.raises(ValueError):
        ThreatTracker(0)


@pytest.mark.parametrize("history, tau, k, want", [
    ([0.3, 0.3, 0.3], 0.2, 3, True),
    ([0.3, 0.1, 0.3], 0.2, 3, False),
    ([0.21], 0.2, 1, True),
    ([0.2], 0.2, 1, False),
    ([0.3, 0.3], 0.2, 3, False),
    ([0.1, 0.3, 0.3, 0.3], 0.2, 3, True),
])
def test_alarm(history, tau, k, want):
    assert alarm(AlarmPolicy(tau, k), history) is want


def test_alarm_policy_for_fps():
    assert AlarmPolicy.for_fps(30).k == 15
    assert AlarmPolicy.for_fps(1).k == 1
    assert AlarmPolicy.for_fps(0.5).k == 1
    with pytest.raises(ValueError):
        AlarmPolicy(-0.1, 1)


@settings(max_examples=100, deadline=None)
@given(areas_st, st.integers(1, 40), st.integers(1, 50))
def test_scale_invariance(areas, p, c):
    a = [r.threat for r in threat_series(areas, p)]
    b = [r.threat for r in threat_series([c * x for x in areas], p)]
    np.testing.assert_allclose(a, b, atol=1e-12)


@given(st.integers(1, 10_000), st.integers(1, 200), st.integers(1, 40))
def test_constant_null(area, n, p):
    assert all(r.threat == 0 for r in threat_series([area] * n, p))


@given(st.integers(1, 200), st.integers(1, 40), st.integers(1, 10))
def test_zero_fire_safety(n, p, k):
    rs = threat_series([0] * n, p)
    hist = [r.threat for r in rs]
    assert all(t == 0 for t in hist)
    assert not any(alarm(AlarmPolicy(0.2, k), hist[:i + 1]) for i in range(n))


@settings(max_examples=100, deadline=None)
@given(areas_st, st.integers(1, 40))
def test_incremental_equals_batch(areas, p):
    t = ThreatTracker(p)
    for i, a in enumerate(areas):
        r = t.update(a)
        seen = areas[:i + 1]
        win = seen[-p:]
        assert t.running_sum == sum(seen)
        assert t.window_sum == sum(win)
        assert r.f_mu == pytest.approx(sum(seen) / len(seen), abs=1e-9)
        assert r.f_mu_p == pytest.approx(sum(win) / len(win), abs=1e-9)
        mu = sum(seen) / len(seen)
        want = (sum(win) / len(win) - mu) / mu if mu > 0 else 0.0
        assert r.threat == pytest.approx(want, abs=1e-9)
        assert r.threat >= -1


def test_tracker_resumes_from_history():
    t = ThreatTracker(3, [1, 2, 3, 4])
    assert t.running_sum == 10 and t.window_sum == 9
    r = t.update(5)
    assert r.f_mu_p == 4 and r.f_mu == 3
