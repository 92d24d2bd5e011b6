#!/usr/bin/env python3
"""Reference top-k cosine expansion over a GloVe text file, written
independently of the Rust crate, used to freeze golden outputs.

Reproduces the crate's numeric contract bit for bit: components parsed as
f64, normalized in f64 by a sequentially summed norm, rounded to f32; dot
products accumulated left to right in f32 without fusion.

usage: reference_expand.py EMBEDDINGS K MODEL_ID SEED...
Prints `surface,score,origin,model` CSV. Seeds must be exact tokens.
"""
import gzip
import math
import sys

import numpy as np


def load(path):
    opener = gzip.open if path.endswith(".gz") else open
    tokens, rows, dim = [], [], None
    seen = set()
    with opener(path, "rt", encoding="utf-8") as f:
        for line in f:
            parts = line.split()
            if not parts:
                continue
            try:
                vals = [float(x) for x in parts[1:]]
            except ValueError:
                continue
            if not vals or any(not math.isfinite(v) for v in vals):
                continue
            if dim is None:
                dim = len(vals)
            if len(vals) != dim or parts[0] in seen:
                continue
            sq = 0.0
            for v in vals:
                sq = sq + v * v
            norm = math.sqrt(sq)
            if norm == 0.0 or not math.isfinite(norm):
                continue
            seen.add(parts[0])
            tokens.append(parts[0])
            rows.append([v / norm for v in vals])
    return tokens, np.array(rows, dtype=np.float64).astype(np.float32)


def clamp(x):
    return min(1.0, max(-1.0, x))


def main():
    path, k, model = sys.argv[1], int(sys.argv[2]), sys.argv[3]
    seeds = sorted(set(sys.argv[4:]))
    tokens, mat = load(path)
    index = {t: i for i, t in enumerate(tokens)}
    excluded = {s.lower() for s in seeds}
    best = np.full(len(tokens), -np.inf, dtype=np.float32)
    origin = np.zeros(len(tokens), dtype=np.int64)
    for si, seed in enumerate(seeds):
        sv = mat[index[seed]]
        acc = np.zeros(len(tokens), dtype=np.float32)
        for j in range(mat.shape[1]):
            acc = (acc + mat[:, j] * sv[j]).astype(np.float32)
        better = acc > best
        best = np.where(better, acc, best)
        origin = np.where(better, si, origin)
    ranked = sorted(
        (i for i, t in enumerate(tokens) if t.lower() not in excluded),
        key=lambda i: (-clamp(float(best[i])), tokens[i]),
    )[:k]
    print("surface,score,origin,model")
    for i in ranked:
        score = clamp(float(best[i])) + 0.0
        print("%s,%.6f,%s,%s" % (tokens[i], score, seeds[origin[i]], model))


if __name__ == "__main__":
    main()
