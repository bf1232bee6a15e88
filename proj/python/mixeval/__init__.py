# python/mixeval/__init__.py

# Copyright 2026  mixeval authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
# THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
# KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
# WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
# MERCHANTABLITY OR NON-INFRINGEMENT.
# See the Apache 2 License for the specific language governing permissions and
# limitations under the License.

"""Cocktail-party phoneme recognition evaluation toolkit."""

from ._core import (
    Error,
    __version__,
    accuracy_oriented,
    collapse,
    deltas,
    edit_distance,
    frame_count,
    gain_for_tir,
    load_audio,
    mfcc39,
    mix_at_tir,
    mixture_metrics,
    parse_phn,
    per,
    run_cli,
    scoring_classes,
    signal_power,
    write_wav,
)

__all__ = [
    "Error",
    "__version__",
    "accuracy_oriented",
    "collapse",
    "deltas",
    "edit_distance",
    "frame_count",
    "gain_for_tir",
    "load_audio",
    "mfcc39",
    "mix_at_tir",
    "mixture_metrics",
    "parse_phn",
    "per",
    "run_cli",
    "scoring_classes",
    "signal_power",
    "write_wav",
]
