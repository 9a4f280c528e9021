# Copyright 2026 The cvec Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math
import pathlib

import numpy as np
import pytest

import cvec

DATA = pathlib.Path(__file__).resolve().parents[1] / "data"


def blobs(k=3, n=6, per_class=40, sep=4.0, seed=1):
    x, y = cvec.make_blobs(k, n, per_class, sep, seed)
    return np.asarray(x), list(y)


def test_parse_and_features_match_golden():
    r, c = np.meshgrid(np.arange(32), np.arange(32), indexing="ij")
    planes = np.stack([(r * 7 + c * 13 + ch * 29 + r * c) % 256 for ch in range(3)])
    record = bytes([3]) + planes.astype(np.uint8).tobytes()
    images, labels = cvec.parse_cifar10(record * 2)
    assert images.shape == (2, 3072)
    assert labels == [3, 3]
    golden = np.loadtxt(DATA / "feature_golden.txt")
    np.testing.assert_allclose(cvec.extract_features(images[0]), golden, atol=1e-12)


def test_bad_cifar_length_raises_data_error():
    with pytest.raises(cvec.DataError):
        cvec.parse_cifar10(b"\x00" * 100)


def test_posterior_is_a_distribution():
    rng = np.random.default_rng(0)
    w = rng.normal(size=(4, 3))
    p = cvec.posteriors(w, rng.normal(size=(10, 4)))
    assert p.shape == (10, 3)
    np.testing.assert_allclose(p.sum(axis=1), 1.0, atol=1e-12)
    np.testing.assert_allclose(cvec.posterior(np.zeros((4, 3)), np.ones(4)), [1 / 3] * 3)


def test_cross_entropy_at_zero_weights():
    x, y = blobs()
    assert cvec.cross_entropy(np.zeros((6, 3)), x, y) == pytest.approx(len(y) * math.log(3))


def test_gradient_is_means_minus_xp():
    x, y = blobs()
    rng = np.random.default_rng(1)
    w = rng.normal(size=(6, 3))
    c = cvec.class_mean_vectors(x, y, 3)
    np.testing.assert_allclose(c[:, 0], x[np.array(y) == 0].sum(axis=0))
    expected = c - x.T @ cvec.posteriors(w, x)
    np.testing.assert_allclose(cvec.gradient(w, x, y), expected, atol=1e-10)


def test_direct_weights_separate_blobs():
    x, y = blobs(sep=8.0)
    c = cvec.class_mean_vectors(x, y, 3)
    w_means = cvec.weights_from_means(c)
    np.testing.assert_allclose(np.linalg.norm(w_means, axis=0), 1.0)
    assert cvec.accuracy(w_means, x, y) >= 0.99
    w_lin = cvec.weights_linearized(x, y, 3)
    np.testing.assert_allclose(x.T @ x @ w_lin, c, atol=1e-8)


def test_train_gd_trace_and_monitor():
    x, y = blobs()
    xs, ys = blobs(seed=2)
    w, trace = cvec.train_gd(x, y, 3, beta=1e-3, iterations=20, seed=4, monitor_x=xs, monitor_y=ys)
    assert w.shape == (6, 3)
    assert trace["t"] == list(range(21))
    assert trace["loss"][-1] < trace["loss"][0]
    assert all(0.0 <= e <= 1.0 for e in trace["e_marker"])
    assert not math.isnan(trace["accuracy"][-1])


def test_e_marker_is_zero_for_parallel_sums():
    x, y = blobs(sep=10.0)
    c = cvec.class_mean_vectors(x, y, 3)
    report = cvec.e_marker(c, cvec.weights_from_means(c), x)
    assert report["e_marker"] == pytest.approx(0.0, abs=1e-12)
    assert report["empty_classes"] == []
    assert cvec.windowed_e_marker(cvec.weights_from_means(c), c, x, window=200) == []


def test_pseudo_gd_inits_and_errors():
    x, y = blobs()
    c = cvec.class_mean_vectors(x, y, 3)
    xs, ys = blobs(seed=3)
    for init in ("minimum_distance", "linearization", "random"):
        w, trace = cvec.pseudo_gd(c, xs, iterations=5, init=init, labels=ys)
        assert len(trace["e_marker"]) == 6
        assert all(math.isnan(v) for v in trace["loss"])
    with pytest.raises(cvec.InvalidArgument):
        cvec.pseudo_gd(c, xs, init="nearest")
    assert issubclass(cvec.InvalidArgument, cvec.Error)


def test_zero_shot_side_information():
    r = cvec.class_correlation(np.eye(3), np.eye(3)[:, ::-1])
    np.testing.assert_allclose(r, np.eye(3)[:, ::-1])
    assert cvec.class_map(r) == [2, 1, 0]
    with pytest.raises(cvec.InvalidArgument):
        cvec.class_map(np.zeros((2, 3)))
