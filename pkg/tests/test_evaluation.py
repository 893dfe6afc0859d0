import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from qrough import (
    NoRegion, SynthScenario, aggregate_metrics, bbox_of, corner_rmse, frame_stats, pixel_metrics,
    rgb_fire_mask, synth_sequence, ycrcb_fire_mask,
)
from qrough.colorspace import ycrcb_array


def test_perfect():
    m = np.zeros((5, 5), bool)
    m[1:3, 1:4] = True
    r = pixel_metrics(m, m)
    assert (r.fp_pct, r.fn_pct, r.precision, r.recall) == (0, 0, 1, 1)


def test_empty_prediction():
    gt = np.zeros((5, 5), bool)
    gt[2, 2] = True
    r = pixel_metrics(np.zeros_like(gt), gt)
    assert r.recall == 0 and r.fn_pct == 100 and r.precision == 1 and r.fp_pct == 0


def test_empty_ground_truth():
    pred = np.ones((2, 2), bool)
    r = pixel_metrics(pred, ~pred)
    assert r.recall == 1 and r.precision == 0 and r.fp_pct == 100


def test_table_like_counts():
    pred = np.zeros(200, bool)
    gt = np.zeros(200, bool)
    pred[:100] = True      # 97 TP + 3 FP
    gt[:97] = True
    gt[100:105] = True     # 5 FN
    r = pixel_metrics(pred, gt)
    assert r.fp_pct == pytest.approx(3.0)
    assert r.fn_pct == pytest.approx(100 * 5 / 102)
    assert r.fn_pct == pytest.approx(4.90, abs=5e-3)
    assert r.precision == pytest.approx(0.97)
    assert r.recall == pytest.approx(0.951, abs=5e-4)


def test_shape_mismatch():
    with pytest.raises(ValueError):
        pixel_metrics(np.zeros((2, 2)), np.zeros((2, 3)))


@settings(max_examples=200)
@given(arrays(bool, (6, 7)), arrays(bool, (6, 7)))
def test_metric_properties(pred, gt):
    a, b = pixel_metrics(pred, gt), pixel_metrics(gt, pred)
    for m in (a, b):
        assert 0 <= m.precision <= 1 and 0 <= m.recall <= 1
        assert 0 <= m.fp_pct <= 100 and 0 <= m.fn_pct <= 100
        assert abs(m.precision - (1 - m.fp_pct / 100)) <= 1e-9
        assert abs(m.recall - (1 - m.fn_pct / 100)) <= 1e-9
    assert (a.fp_pct, a.fn_pct) == (b.fn_pct, b.fp_pct)
    assert (a.precision, a.recall) == (b.recall, b.precision)


def test_aggregate():
    m = aggregate_metrics([pixel_metrics([[1, 1]], [[1, 0]]), pixel_metrics([[1, 0]], [[1, 0]])])
    assert m.n_frames == 2 and m.precision == 0.75 and m.fp_pct == 25
    with pytest.raises(ValueError):
        aggregate_metrics([])


def test_bbox():
    m = np.zeros((8, 8), bool)
    assert bbox_of(m) is None
    m[5, 3] = True
    assert bbox_of(m) == (3, 5, 3, 5)
    m[:] = False
    m[1, 1] = m[2, 4] = True
    assert bbox_of(m) == (1, 1, 4, 2)


def test_corner_rmse_examples():
    assert corner_rmse((1, 2, 5, 9), (1, 2, 5, 9)) == 0
    assert corner_rmse((3, 4, 13, 14), (0, 0, 10, 10)) == 5
    assert corner_rmse((0, 0, 10, 10), (0, 0, 14, 10)) == pytest.approx(math.sqrt(8))
    with pytest.raises(NoRegion, match="no region"):
        corner_rmse(None, (0, 0, 1, 1))


boxes = st.tuples(st.integers(0, 50), st.integers(0, 50), st.integers(0, 50), st.integers(0, 50))


@given(boxes, boxes, boxes)
def test_corner_rmse_is_metric(a, b, c):
    assert corner_rmse(a, b) == corner_rmse(b, a)
    assert (corner_rmse(a, b) == 0) == (a == b)
    assert corner_rmse(a, c) <= corner_rmse(a, b) + corner_rmse(b, c) + 1e-9


def test_flicker_alternates():
    s = SynthScenario("flicker", frames=60)
    _, gts = synth_sequence(s)
    areas = np.array([g.sum() for g in gts]) / s.base_area
    hi, lo = areas[::2], areas[1::2]
    if hi[0] < lo[0]:
        hi, lo = lo, hi
    np.testing.assert_allclose(hi, 1.1, rtol=0.02)
    np.testing.assert_allclose(lo, 0.9, rtol=0.02)


def test_grow_trajectory():
    s = SynthScenario("grow", frames=30, rate=1.05, base_area=2000)
    _, gts = synth_sequence(s)
    assert gts[-1].sum() == pytest.approx(2000 * 1.05**29, rel=0.02)
    assert gts[0].sum() == pytest.approx(2000, rel=0.02)


def test_shrink_and_flashover():
    _, gts = synth_sequence(SynthScenario("shrink", frames=40, rate=1.03))
    areas = [g.sum() for g in gts]
    assert areas[-1] == pytest.approx(3000 * 1.03**-39, rel=0.05)
    _, gts = synth_sequence(SynthScenario("flashover", frames=40))
    areas = [g.sum() for g in gts]
    assert areas[19] == pytest.approx(3000, rel=0.02)
    assert areas[20] == pytest.approx(12000, rel=0.02)


@pytest.mark.parametrize("kind", ["flicker", "grow", "shrink", "flashover"])
def test_synth_colours_pass_and_fail_rules(kind):
    frames, gts = synth_sequence(SynthScenario(kind, frames=12, width=64, height=48, base_area=300))
    for f, gt in zip(frames, gts):
        assert (f.pixels[gt] == (255, 120, 30)).all()
        s = frame_stats(f)
        ycc = ycrcb_array(f.pixels)
        rule3 = (ycc[..., 2] <= 120) & (ycc[..., 1] > 150)
        assert rule3[gt].all()
        m_y = ycrcb_fire_mask(f, s)
        m_r = rgb_fire_mask(f, s)
        np.testing.assert_array_equal(m_y, gt)
        np.testing.assert_array_equal(m_r, gt)


def test_synth_deterministic():
    a = synth_sequence(SynthScenario("flicker", frames=10, seed=3))
    b = synth_sequence(SynthScenario("flicker", frames=10, seed=3))
    for fa, fb in zip(a[0], b[0]):
        np.testing.assert_array_equal(fa.pixels, fb.pixels)


def test_synth_clamps_with_warning():
    with pytest.warns(UserWarning, match="clamped"):
        _, gts = synth_sequence(SynthScenario("grow", frames=3, base_area=5000, width=40, height=30))
    assert gts[-1].all()


def test_synth_validation():
    with pytest.raises(ValueError):
        SynthScenario("explode")
    with pytest.raises(ValueError):
        SynthScenario("grow", frames=0)
