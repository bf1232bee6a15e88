# tests/python/test_smoke.py

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

import json
import os
import pathlib
import subprocess
import sys

import numpy as np
import pytest

import mixeval

DATA = pathlib.Path(os.environ["MIXEVAL_TEST_DATA"])
CLI = os.environ["MIXEVAL_CLI"]
CORPUS = DATA / "timit"
ADAPTER = pathlib.Path(__file__).resolve().parent.parent / "tools" / "fake_adapter.py"


def test_version_and_classes():
    assert mixeval.__version__
    classes = mixeval.scoring_classes()
    assert len(classes) == 38
    assert "sil" not in classes
    assert mixeval.collapse(["h#", "ao", "pcl", "ix", "h#"]) == ["aa", "ih"]


def test_audio_round_trip(tmp_path):
    wav = next(CORPUS.rglob("*.WAV"))
    x, rate = mixeval.load_audio(wav)
    assert rate == 16000 and x.ndim == 1 and np.abs(x).max() <= 1.0
    mixeval.write_wav(tmp_path / "a.wav", x)
    y, _ = mixeval.load_audio(tmp_path / "a.wav")
    np.testing.assert_allclose(x, y, atol=1 / 32768)
    spans = mixeval.parse_phn(wav.with_suffix(".PHN"))
    assert spans[0][2] == "h#" and spans[-1][1] <= len(x)


def test_mixing_realizes_tir():
    rng = np.random.default_rng(0)
    t, i = rng.normal(size=3000), 4 * rng.normal(size=2000)
    mix, gain = mixeval.mix_at_tir(t, i, 12.0)
    assert mix.shape == t.shape
    pt, pi = mixeval.signal_power(t), mixeval.signal_power(i)
    assert 10 * np.log10(pt / (gain**2 * pi)) == pytest.approx(12.0, abs=1e-9)
    np.testing.assert_allclose(mix[:2000], t[:2000] + gain * i)
    mix, _ = mixeval.mix_at_tir(t[:100], i, 0.0, max_length=True)
    assert mix.shape == (2000,)


def test_features():
    x = np.random.default_rng(1).normal(size=16000)
    f = mixeval.mfcc39(x)
    assert f.shape == (mixeval.frame_count(16000), 39) == (98, 39)
    ramp = np.outer(np.arange(20.0), np.ones(3))
    d = mixeval.deltas(ramp)
    np.testing.assert_allclose(d[2:-2], 1.0, atol=1e-12)
    with pytest.raises(mixeval.Error):
        mixeval.mfcc39(np.zeros(0))


def test_scoring():
    c = mixeval.edit_distance(["a", "b", "c"], ["a", "x", "c", "d"])
    assert (c["substitutions"], c["deletions"], c["insertions"]) == (1, 0, 1)
    assert mixeval.per([(["a", "b"], ["a", "b"]), (["c", "d"], [])]) == 50.0
    m = mixeval.mixture_metrics(
        ["s", "t"], [("s", "t", ["s"]), ("s", "t", ["t"]), ("s", "s", ["x"])])
    assert m["total_trials"] == 3
    assert m["rates"][0, 1] == 50.0
    oriented, total = mixeval.accuracy_oriented(
        ["s", "t"], np.array([[0, 80.0], [20.0, 0]]), {"s": 0.9, "t": 0.5})
    assert (oriented, total) == (1, 1)


def test_run_cli_in_process(tmp_path):
    assert mixeval.run_cli(["ingest", "--timit-root", str(CORPUS),
                            "--out", str(tmp_path / "catalog.json")]) == 0
    assert mixeval.run_cli(["mix-voices", "--no-such-flag"]) == 2


def test_subprocess_adapter_convention(tmp_path):
    out = tmp_path / "run"
    cmd = f"{sys.executable} {ADAPTER} --mode echo"
    r = subprocess.run(
        [CLI, "mix-voices", "--timit-root", str(CORPUS), "--out", str(out),
         "--combo", "f-f", "--tir", "3", "--sets", "1",
         "--backend", "subprocess", "--backend-cmd", cmd],
        capture_output=True, text=True, check=True)
    assert "f-f tir 3 dB: PER 0.00% (ok)" in r.stdout
    cell = out / "voice" / "f-f" / "tir03" / "set000"
    entries = [json.loads(l) for l in (cell / "manifest.jsonl").read_text().splitlines()]
    assert entries and all(not pathlib.Path(e["audio"]).is_absolute() for e in entries)
    assert set(entries[0]) >= {"id", "audio", "ref", "tags"}
    hyps = (cell / "hyps.tsv").read_text().splitlines()
    assert [h.split("\t")[0] for h in hyps] == [e["id"] for e in entries]


def test_cli_usage_error_exit_code():
    r = subprocess.run([CLI, "score", "--bogus"], capture_output=True)
    assert r.returncode == 2
