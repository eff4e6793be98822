import importlib
import sys

import numpy as np
import pytest

from flicseg import EngineState, SegmentationConfig, kernels, perturb_seeds, run, run_slic
from flicseg import srgb_to_feature_image
from flicseg.synth import make_image

needs_cython = pytest.mark.skipif("cython" not in kernels.BACKENDS,
                                  reason="compiled extension not built")


def test_unknown_backend():
    with pytest.raises(ValueError, match="not available"):
        kernels.get_backend("fortran")


def test_fallback_when_extension_missing(monkeypatch):
    import flicseg

    monkeypatch.setitem(sys.modules, "flicseg._ckernels", None)
    monkeypatch.delattr(flicseg, "_ckernels", raising=False)
    try:
        reloaded = importlib.reload(kernels)
        assert reloaded.DEFAULT == "python"
        assert sorted(reloaded.BACKENDS) == ["python"]
    finally:
        monkeypatch.undo()
        importlib.reload(kernels)


@needs_cython
def test_compiled_backend_is_default():
    assert kernels.DEFAULT == "cython"


CASES = [
    ("blocks", 64, 48, dict(k_requested=30)),
    ("rects", 57, 41, dict(k_requested=9, neighborhood=8)),
    ("gradient", 40, 70, dict(k_requested=25, scan_mode="forward")),
    ("split", 50, 50, dict(k_requested=12, update_mode="separate", iterations=3)),
]


@needs_cython
@pytest.mark.parametrize("kind, w, h, kw", CASES)
def test_backends_bit_identical(kind, w, h, kw):
    img, _ = make_image(kind, w, h, seed=w * h)
    feats = srgb_to_feature_image(img)
    cfg = SegmentationConfig.defaults("flic", **kw)
    states = {}
    for name in ("python", "cython"):
        seen = []
        result = run(feats, cfg, backend=name,
                     observer=lambda itr, s: seen.append((s.sums.copy(), s.means.copy())))
        states[name] = (result, seen)
    (py, py_seen), (cy, cy_seen) = states["python"], states["cython"]
    assert py.labels == cy.labels
    assert py.label_changes == cy.label_changes
    for (s1, m1), (s2, m2) in zip(py_seen, cy_seen):
        assert s1.tobytes() == s2.tobytes() and m1.tobytes() == m2.tobytes()


@needs_cython
def test_slic_backends_identical():
    img, _ = make_image("blocks", 60, 45, seed=8)
    feats = srgb_to_feature_image(img)
    cfg = SegmentationConfig.defaults("slic", k_requested=20)
    assert run_slic(feats, cfg, backend="python").labels == run_slic(feats, cfg, backend="cython").labels


@needs_cython
def test_accumulate_backends_identical():
    img, _ = make_image("rects", 33, 29, seed=1)
    feats = srgb_to_feature_image(img)
    state = perturb_seeds(EngineState.initial(feats, SegmentationConfig(k_requested=16)))
    lab = np.random.default_rng(0).integers(0, state.k_actual, size=33 * 29).astype(np.int32)
    outs = []
    for name in ("python", "cython"):
        sums = np.empty_like(state.sums)
        counts = np.empty_like(state.counts)
        bbox = np.empty_like(state.bbox)
        kernels.get_backend(name).accumulate(feats.flat, lab, sums, counts, bbox, 33, 29)
        outs.append((sums.tobytes(), counts.tobytes(), bbox.tobytes()))
    assert outs[0] == outs[1]
