import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flicseg import (
    CorruptLabelsError,
    FeatureImage,
    InvalidConfigurationError,
    LabelMap,
    RawImage,
    SegmentationConfig,
    grid_init,
    init_superpixel_states,
    segment,
    srgb_to_feature_image,
)
from flicseg.imagecore import accumulate


def test_grid_evenly_divisible():
    grid, labels = grid_init(12, 12, 9)
    assert grid.step == pytest.approx(4.0)
    assert (grid.cols, grid.rows, grid.k_actual) == (3, 3, 9)
    assert labels.labels[0, 0] == 0
    assert labels.labels[11, 11] == 8


def test_grid_bsds_size():
    grid, _ = grid_init(481, 321, 200)
    assert grid.step == pytest.approx(27.785, abs=1e-3)
    assert (grid.cols, grid.rows, grid.k_actual) == (17, 12, 204)


def test_grid_floor_partition():
    grid, labels = grid_init(10, 10, 9)
    assert (grid.cols, grid.rows) == (3, 3)
    assert grid.col_edges.tolist() == [0, 3, 6, 10]
    row = labels.labels[0]
    assert row.tolist() == [0, 0, 0, 1, 1, 1, 2, 2, 2, 2]


def test_grid_two_cells_split_left_right():
    grid, labels = grid_init(16, 16, 2)
    assert (grid.cols, grid.rows) == (2, 1)
    assert (labels.labels[:, :8] == 0).all() and (labels.labels[:, 8:] == 1).all()


@settings(max_examples=60, deadline=None)
@given(w=st.integers(3, 80), h=st.integers(3, 80), data=st.data())
def test_grid_cells_partition_image(w, h, data):
    k = data.draw(st.integers(1, w * h // 4))
    grid, labels = grid_init(w, h, k)
    lab = labels.labels
    assert grid.k_actual == grid.cols * grid.rows
    counts = np.bincount(lab.ravel(), minlength=grid.k_actual)
    assert counts.min() >= 1 and counts.sum() == w * h
    # Each cell is exactly the product of its column and row spans.
    edges_x, edges_y = grid.col_edges, grid.row_edges
    for j in range(grid.rows):
        for i in range(grid.cols):
            cell = lab[edges_y[j] : edges_y[j + 1], edges_x[i] : edges_x[i + 1]]
            assert (cell == j * grid.cols + i).all()


@pytest.mark.parametrize("w, h, k", [(2, 10, 1), (10, 2, 1), (10, 10, 0), (10, 10, 26)])
def test_grid_rejects_bad_input(w, h, k):
    with pytest.raises(InvalidConfigurationError):
        grid_init(w, h, k)


def _features(w, h, lab=None):
    lab = np.zeros((h, w, 3)) if lab is None else lab
    return FeatureImage.from_lab(lab)


def test_feature_coordinates():
    feats = _features(5, 3)
    assert feats.flat.shape == (15, 5)
    assert (feats.features[..., 3] == np.arange(5)[None, :]).all()
    assert (feats.features[..., 4] == np.arange(3)[:, None]).all()


def test_state_single_superpixel():
    feats = _features(4, 4, np.full((4, 4, 3), 50.0))
    labels = LabelMap.from_array(np.zeros((4, 4), dtype=int))
    (sp,) = init_superpixel_states(feats, labels, 1)
    assert sp.count == 16
    assert sp.mean[3:] == (1.5, 1.5)
    assert sp.bbox == (0, 0, 3, 3)


def test_state_grid_cell():
    feats = _features(12, 12)
    grid, labels = grid_init(12, 12, 9)
    states = init_superpixel_states(feats, labels, grid.k_actual)
    assert states[0].count == 16
    assert states[0].mean[3:] == (1.5, 1.5)
    assert states[0].bbox == (0, 0, 3, 3)


@settings(max_examples=40, deadline=None)
@given(w=st.integers(3, 24), h=st.integers(3, 24), k=st.integers(1, 6), seed=st.integers(0, 10**6))
def test_accumulate_matches_definition(w, h, k, seed):
    rng = np.random.default_rng(seed)
    feats = _features(w, h, rng.integers(0, 100, size=(h, w, 3)).astype(float))
    lab = rng.integers(0, k, size=(h, w))
    sums, counts, bbox = accumulate(feats, LabelMap.from_array(lab), k)
    for j in range(k):
        ys, xs = np.nonzero(lab == j)
        assert counts[j] == len(ys)
        assert np.array_equal(sums[j], feats.features[ys, xs].sum(axis=0))
        if len(ys):
            assert tuple(bbox[j]) == (xs.min(), ys.min(), xs.max(), ys.max())
        else:
            assert tuple(bbox[j]) == (w, h, -1, -1)


def test_accumulate_rejects_out_of_range_labels():
    feats = _features(4, 4)
    lab = np.zeros((4, 4), dtype=int)
    lab[2, 2] = 3
    with pytest.raises(CorruptLabelsError, match="label 3"):
        accumulate(feats, LabelMap.from_array(lab), 2)


def test_segmentation_needs_3x3():
    img = RawImage.from_array(np.zeros((2, 5, 3), dtype=np.uint8))
    with pytest.raises(InvalidConfigurationError, match="3x3"):
        segment(srgb_to_feature_image(img), SegmentationConfig(k_requested=1))


def test_label_map_equality():
    a = LabelMap.from_array(np.array([[0, 1], [1, 0]]))
    assert a == LabelMap.from_array(np.array([[0, 1], [1, 0]]))
    assert a != LabelMap.from_array(np.array([[0, 1], [0, 1]]))
    assert a.n_labels == 2


def test_config_defaults():
    flic = SegmentationConfig.defaults("flic", k_requested=200)
    assert (flic.compactness, flic.iterations, flic.neighborhood) == (5.0, 2, 4)
    assert flic.scan_mode == "back-and-forth" and flic.update_mode == "joint"
    assert not flic.enforce_connectivity
    slic = SegmentationConfig.defaults("slic", k_requested=200, iterations=None)
    assert slic.iterations == 10 and slic.enforce_connectivity


@pytest.mark.parametrize("field, value", [
    ("k_requested", 0), ("compactness", 0.0), ("iterations", 0),
    ("neighborhood", 6), ("scan_mode", "sideways"), ("update_mode", "lazy"),
    ("algorithm", "watershed"),
])
def test_config_validation(field, value):
    kwargs = {"k_requested": 10, field: value}
    with pytest.raises(InvalidConfigurationError):
        SegmentationConfig(**kwargs)
