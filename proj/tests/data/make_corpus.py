#!/usr/bin/env python3
# tests/data/make_corpus.py

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

# Regenerates the small TIMIT-shaped corpus under tests/data/timit.  The audio
# is synthetic: voiced phones are harmonic stacks shaped by two formants,
# fricatives are band-passed noise, stops are a short burst.  Output is
# deterministic for a given numpy version.
#
# usage: make_corpus.py [out_dir]

import os
import sys

import numpy as np

RATE = 16000

# (split, dialect, speaker, sentence, phones)
UTTERANCES = [
    ("TEST", "DR1", "FAKS0", "SA1",
     "h# sh iy hv ae dcl d y er dcl d aa r kcl k s uw dx ih ng gcl g r iy s iy w aa sh epi w ao dx er q ao l y iy er h#"),
    ("TEST", "DR1", "FAKS0", "SX43",
     "h# t ow n ey tcl t ah m ay s eh l f pau ih z ay dh ax s t aa r ow ey ah s h#"),
    ("TEST", "DR2", "FDAC1", "SI844",
     "h# bcl b ow th ey w eh n tcl t ah n ay s ax-h l eh s aa dcl d er ih t s ow h#"),
    ("TEST", "DR2", "FDAC1", "SX214",
     "h# m ay f aa dh er s eh dcl d ih tcl t ey k s ow l ah ng ix r ay dx er h#"),
    ("TEST", "DR1", "MDAB0", "SA2",
     "h# dcl d ow n ae s kcl k m iy tcl t ix kcl k eh r iy ah n oy l iy r ae gcl g l ay kcl k dh ae tcl t h#"),
    ("TEST", "DR1", "MDAB0", "SI1039",
     "h# hh ay s t aa r t s ow er l iy pau eh v r iy dcl d ey en t ah s ih t h#"),
    ("TEST", "DR3", "MWBT0", "SX383",
     "h# aa l ow ey ah w ay t er s ih l v er eh s t ih ng ay t ow h#"),
    ("TEST", "DR3", "MWBT0", "SI2183",
     "h# zh ah pcl p ey s uh ch aa r jh ow th er s ay t ih n eh k s t eh m h#"),
    ("TRAIN", "DR1", "FCJF0", "SA1",
     "h# sh ix hv eh dcl jh ih dcl d ah kcl k ux s q en gcl g r ix s w ao sh epi w ao dx axr ao l y ih axr h#"),
    ("TRAIN", "DR1", "MDPK0", "SX333",
     "h# ch uw z el em eng nx aw dh ih s ux v ae th axr pau z ay h#"),
]

VOWELS = {
    "iy": (270, 2290), "ih": (390, 1990), "ix": (400, 1900), "eh": (530, 1840),
    "ey": (480, 2100), "ae": (660, 1720), "aa": (730, 1090), "ao": (570, 840),
    "ah": (640, 1190), "ax": (500, 1400), "ax-h": (500, 1400), "uh": (440, 1020),
    "uw": (300, 870), "ux": (320, 1500), "ow": (450, 900), "ay": (700, 1300),
    "aw": (700, 1100), "oy": (550, 1000), "er": (490, 1350), "axr": (500, 1400),
    "l": (360, 1000), "el": (380, 1000), "r": (420, 1300), "w": (300, 700),
    "y": (280, 2200), "m": (250, 1200), "em": (250, 1200), "n": (250, 1700),
    "en": (250, 1700), "nx": (250, 1700), "ng": (250, 2000), "eng": (250, 2000),
    "hv": (500, 1500), "v": (250, 1200), "dh": (250, 1300), "z": (250, 1600),
    "zh": (250, 1700), "dx": (300, 1600), "q": (300, 1200),
}
FRICATIVES = {
    "s": (4000, 7000), "sh": (2000, 5000), "f": (1500, 7500), "th": (1500, 7000),
    "hh": (500, 3000), "z": (4000, 7000), "zh": (2000, 5000), "v": (1500, 6000),
    "dh": (1500, 6000), "ch": (2000, 6000), "jh": (1800, 5000),
}
STOPS = {"b": 600, "d": 3000, "g": 1800, "p": 800, "t": 4000, "k": 2000,
         "ch": 3000, "jh": 2500}
SILENT = {"h#", "pau", "epi", "bcl", "dcl", "gcl", "pcl", "tcl", "kcl"}


def bandpass_noise(rng, n, lo, hi):
    spec = np.fft.rfft(rng.standard_normal(n))
    freqs = np.fft.rfftfreq(n, 1.0 / RATE)
    spec[(freqs < lo) | (freqs > hi)] = 0
    x = np.fft.irfft(spec, n)
    return x / (np.abs(x).max() + 1e-12)


def voiced(n, f0, f1, f2):
    t = np.arange(n) / RATE
    out = np.zeros(n)
    for h in range(1, int(5000 / f0)):
        f = h * f0
        amp = np.exp(-((f - f1) / 150.0) ** 2) + 0.6 * np.exp(-((f - f2) / 200.0) ** 2)
        out += (amp + 0.02) / h ** 0.5 * np.sin(2 * np.pi * f * t)
    return out / (np.abs(out).max() + 1e-12)


def phone_audio(rng, label, n, f0):
    env = np.hanning(n) ** 0.3 if n > 2 else np.ones(n)
    if label in SILENT:
        return 0.003 * rng.standard_normal(n)
    x = np.zeros(n)
    if label in VOWELS:
        f1, f2 = VOWELS[label]
        x += 0.5 * voiced(n, f0, f1, f2)
    if label in FRICATIVES:
        lo, hi = FRICATIVES[label]
        x += 0.25 * bandpass_noise(rng, n, lo, hi)
    if label in STOPS:
        burst = min(n, 320)
        x[:burst] += 0.4 * bandpass_noise(rng, burst, STOPS[label] * 0.6,
                                          STOPS[label] * 1.6)
    return x * env + 0.003 * rng.standard_normal(n)


def write_sphere(path, samples):
    pcm = np.clip(np.round(samples * 32768.0), -32768, 32767).astype("<i2")
    fields = ("NIST_1A\n   1024\n"
              "database_id -s5 TIMIT\n"
              "channel_count -i 1\n"
              f"sample_count -i {len(pcm)}\n"
              f"sample_rate -i {RATE}\n"
              "sample_n_bytes -i 2\n"
              "sample_byte_format -s2 01\n"
              "sample_sig_bits -i 16\n"
              "end_head\n")
    header = fields.encode("ascii").ljust(1024, b" ")
    with open(path, "wb") as f:
        f.write(header)
        f.write(pcm.tobytes())


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(
        os.path.dirname(os.path.abspath(__file__)), "timit")
    rng = np.random.default_rng(20260101)
    for split, dialect, speaker, sentence, phones in UTTERANCES:
        f0 = 210.0 if speaker[0] == "F" else 115.0
        d = os.path.join(out, split, dialect, speaker)
        os.makedirs(d, exist_ok=True)
        pieces, rows, pos = [], [], 0
        for label in phones.split():
            if label == "h#":
                n = int(rng.integers(1600, 3200))
            elif label in SILENT or label in STOPS:
                n = int(rng.integers(480, 1200))
            else:
                n = int(rng.integers(960, 2400))
            pieces.append(phone_audio(rng, label, n, f0 * rng.uniform(0.95, 1.05)))
            rows.append(f"{pos} {pos + n} {label}")
            pos += n
        audio = 0.3 * np.concatenate(pieces)
        write_sphere(os.path.join(d, sentence + ".WAV"), audio)
        with open(os.path.join(d, sentence + ".PHN"), "w") as f:
            f.write("\n".join(rows) + "\n")


if __name__ == "__main__":
    main()
