# Copyright 2026 The qml-nbe Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Typechecking, evaluation and normalisation of pure QML programs."""

from ._core import (
    DEFAULT_TOLERANCE,
    QmlError,
    check,
    check_derivation,
    equiv,
    eval,
    inner_product,
    nf,
)

__all__ = [
    "DEFAULT_TOLERANCE",
    "QmlError",
    "check",
    "check_derivation",
    "equiv",
    "eval",
    "inner_product",
    "nf",
]
