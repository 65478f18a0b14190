# Copyright 2026 The refgame Authors
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

"""Solvers for quantum interactive proofs and short refereed games."""

from ._core import (
    Game,
    MixedCircuit,
    NumericalError,
    PreconditionError,
    Prover,
    acceptance_given_no,
    cli,
    close_images_verifier,
    decide,
    fidelity,
    helstrom_povm,
    image_distance,
    parallel_repeat,
    qip_value,
    rejection_given_yes,
    repeat_prover,
    saddle,
    search,
    simulate,
    trace_norm,
)

__version__ = "1.0.0"

__all__ = [
    "Game",
    "MixedCircuit",
    "NumericalError",
    "PreconditionError",
    "Prover",
    "acceptance_given_no",
    "cli",
    "close_images_verifier",
    "decide",
    "fidelity",
    "helstrom_povm",
    "image_distance",
    "parallel_repeat",
    "qip_value",
    "rejection_given_yes",
    "repeat_prover",
    "saddle",
    "search",
    "simulate",
    "trace_norm",
]
