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
"""Class-mean-vector methods for one-layer softmax classifiers.

Samples are passed as rows (an N x n array); weight and C-vector matrices
are n x K with one column per class.
"""

from ._cvec import (
    DataError,
    Error,
    InvalidArgument,
    NumericalError,
    accuracy,
    class_correlation,
    class_map,
    class_mean_vectors,
    cross_entropy,
    e_marker,
    extract_features,
    gradient,
    make_blobs,
    parse_cifar10,
    posterior,
    posteriors,
    predict,
    pseudo_gd,
    train_gd,
    weights_from_means,
    weights_linearized,
    windowed_e_marker,
)

__all__ = [
    "DataError",
    "Error",
    "InvalidArgument",
    "NumericalError",
    "accuracy",
    "class_correlation",
    "class_map",
    "class_mean_vectors",
    "cross_entropy",
    "e_marker",
    "extract_features",
    "gradient",
    "make_blobs",
    "parse_cifar10",
    "posterior",
    "posteriors",
    "predict",
    "pseudo_gd",
    "train_gd",
    "weights_from_means",
    "weights_linearized",
    "windowed_e_marker",
]
