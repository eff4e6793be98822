import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from flicseg import (
    InvalidConfigurationError,
    LabelMap,
    UndefinedMetricError,
    achievable_segmentation_accuracy,
    boundary_mask,
    boundary_recall,
    evaluate,
    undersegmentation_error,
)

LEFT_RIGHT = np.array([[0, 0, 1, 1]] * 4)
TOP_BOTTOM = LEFT_RIGHT.T.copy()


def random_map(rng, h, w, k):
    """Blocky map: coarse random labels upsampled, then a few pixels flipped."""
    fy, fx = rng.integers(1, 9), rng.integers(1, 9)
    coarse = rng.integers(0, k, size=(-(-h // fy), -(-w // fx)))
    lab = np.repeat(np.repeat(coarse, fy, axis=0), fx, axis=1)[:h, :w]
    flip = rng.random((h, w)) < rng.choice([0.0, 0.02, 0.3])
    lab[flip] = rng.integers(0, k, size=int(flip.sum()))
    return lab


label_maps = st.builds(
    lambda seed, h, w, k: random_map(np.random.default_rng(seed), h, w, k),
    st.integers(0, 10**6), st.integers(2, 24), st.integers(2, 24), st.integers(2, 6),
)


# boundary_mask


def test_mask_constant_map_all_false():
    assert boundary_mask(np.zeros((5, 7), dtype=int)).count == 0


def test_mask_left_right():
    mask = boundary_mask(LabelMap.from_array(LEFT_RIGHT))
    assert mask.count == 8
    assert mask.mask[:, 1:3].all() and not mask.mask[:, [0, 3]].any()


def test_mask_single_pixel():
    lab = np.zeros((5, 5), dtype=int)
    lab[2, 2] = 1
    ys, xs = np.nonzero(boundary_mask(lab).mask)
    assert sorted(zip(ys.tolist(), xs.tolist())) == [(1, 2), (2, 1), (2, 2), (2, 3), (3, 2)]


@settings(max_examples=50, deadline=None)
@given(label_maps)
def test_mask_matches_loops(lab):
    ys, xs = np.nonzero(boundary_mask(lab).mask)
    assert list(zip(ys.tolist(), xs.tolist())) == oracles.boundary_pixels(lab)


# boundary_recall


def test_br_hand_values():
    assert boundary_recall(TOP_BOTTOM, LEFT_RIGHT, 1) == 0.5
    assert boundary_recall(TOP_BOTTOM, LEFT_RIGHT, 2) == 1.0


def test_br_identical_maps():
    rng = np.random.default_rng(0)
    lab = random_map(rng, 30, 30, 4)
    assert boundary_recall(lab, lab, 2) == 1.0


def test_br_undefined_for_single_segment_gt():
    with pytest.raises(UndefinedMetricError):
        boundary_recall(LEFT_RIGHT, np.zeros((4, 4), dtype=int))


def test_br_constant_segmentation_is_zero():
    assert boundary_recall(np.zeros((4, 4), dtype=int), LEFT_RIGHT) == 0.0


def test_size_mismatch():
    with pytest.raises(InvalidConfigurationError):
        undersegmentation_error(np.zeros((4, 4), dtype=int), np.zeros((4, 5), dtype=int))


@settings(max_examples=60, deadline=None)
@given(seg=label_maps, data=st.data())
def test_br_monotone_in_epsilon(seg, data):
    rng = np.random.default_rng(data.draw(st.integers(0, 10**6)))
    gt = random_map(rng, *seg.shape, 3)
    if not boundary_mask(gt).mask.any():
        return
    values = [boundary_recall(seg, gt, eps) for eps in (0.5, 1, 1.5, 2, 3, 5, 8)]
    assert values == sorted(values)


# UE and ASA


def test_ue_asa_hand_values():
    assert undersegmentation_error(TOP_BOTTOM, LEFT_RIGHT) == 1.0
    assert achievable_segmentation_accuracy(TOP_BOTTOM, LEFT_RIGHT) == 0.5


def test_single_superpixel_over_halves():
    one = np.zeros((6, 8), dtype=int)
    gt = np.zeros((6, 8), dtype=int)
    gt[:, 4:] = 1
    assert undersegmentation_error(one, gt) == 1.0
    assert achievable_segmentation_accuracy(one, gt) == 0.5


def test_identical_maps():
    rng = np.random.default_rng(1)
    lab = random_map(rng, 20, 20, 5)
    report = evaluate(lab, lab)
    assert (report.br, report.ue, report.asa) == (1.0, 0.0, 1.0)
    assert set(report.timings) == {"br", "ue", "asa"}


@settings(max_examples=60, deadline=None)
@given(seg=label_maps, data=st.data())
def test_metrics_match_oracles(seg, data):
    rng = np.random.default_rng(data.draw(st.integers(0, 10**6)))
    gt = random_map(rng, *seg.shape, 4)
    assert undersegmentation_error(seg, gt) == oracles.undersegmentation_error(seg, gt)
    assert achievable_segmentation_accuracy(seg, gt) == oracles.achievable_segmentation_accuracy(seg, gt)
    if boundary_mask(gt).mask.any():
        for eps in (1, 2, 2.5):
            assert boundary_recall(seg, gt, eps) == oracles.boundary_recall(seg, gt, eps)


@settings(max_examples=60, deadline=None)
@given(seg=label_maps, data=st.data())
def test_invariant_under_relabeling(seg, data):
    rng = np.random.default_rng(data.draw(st.integers(0, 10**6)))
    gt = random_map(rng, *seg.shape, 4)
    seg2 = rng.permutation(100)[seg] + 7
    gt2 = rng.permutation(100)[gt] * 3
    assert undersegmentation_error(seg2, gt2) == undersegmentation_error(seg, gt)
    assert achievable_segmentation_accuracy(seg2, gt2) == achievable_segmentation_accuracy(seg, gt)
    if boundary_mask(gt).mask.any():
        assert boundary_recall(seg2, gt2) == boundary_recall(seg, gt)


@settings(max_examples=60, deadline=None)
@given(seg=label_maps, data=st.data())
def test_refinement_monotonicity(seg, data):
    rng = np.random.default_rng(data.draw(st.integers(0, 10**6)))
    gt = random_map(rng, *seg.shape, 4)
    # Split one superpixel into two arbitrary parts.
    target = rng.choice(np.unique(seg))
    split = seg.copy()
    members = split == target
    split[members & (rng.random(seg.shape) < 0.5)] = seg.max() + 1
    assert achievable_segmentation_accuracy(split, gt) >= achievable_segmentation_accuracy(seg, gt)
    assert undersegmentation_error(split, gt) <= undersegmentation_error(seg, gt)


@settings(max_examples=40, deadline=None)
@given(seg=label_maps, data=st.data())
def test_ranges(seg, data):
    rng = np.random.default_rng(data.draw(st.integers(0, 10**6)))
    gt = random_map(rng, *seg.shape, 4)
    assert 0.0 <= achievable_segmentation_accuracy(seg, gt) <= 1.0
    assert undersegmentation_error(seg, gt) >= 0.0
    if boundary_mask(gt).mask.any():
        assert 0.0 <= boundary_recall(seg, gt) <= 1.0
