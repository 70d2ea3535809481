# Copyright 2026 The XFL Authors
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

"""Regenerates the committed demo CSVs. Deterministic; run from demos/."""

import pathlib
import random

ROOT = pathlib.Path(__file__).resolve().parent


def write_csv(path, ids, features, columns, labels=None):
    path.parent.mkdir(parents=True, exist_ok=True)
    header = ["id"] + features + (["y"] if labels is not None else [])
    lines = [",".join(header)]
    for i, rid in enumerate(ids):
        row = [rid] + [f"{col[i]:.6f}" for col in columns]
        if labels is not None:
            row.append(str(labels[i]))
        lines.append(",".join(row))
    path.write_text("\n".join(lines) + "\n")


def linear_blobs(rng, n, d, prefix, w=None):
    """Binary labels from a noisy linear rule over uniform features."""
    if w is None:
        w = [rng.uniform(-1.0, 1.0) for _ in range(d)]
    ids, cols, ys = [], [[] for _ in range(d)], []
    for i in range(n):
        ids.append(f"{prefix}{i}")
        x = [rng.uniform(-1.0, 1.0) for _ in range(d)]
        for j in range(d):
            cols[j].append(x[j])
        z = 0.15 + sum(wj * xj for wj, xj in zip(w, x)) + rng.gauss(0.0, 0.25)
        ys.append(1 if z > 0.0 else 0)
    assert 0 < sum(ys) < n, "demo data must contain both classes"
    return ids, cols, ys


def horizontal():
    rng = random.Random(20260801)
    # All parties label with the same rule; only their samples differ.
    w = [rng.uniform(-1.0, 1.0) for _ in range(3)]
    for name in ("alice", "bob", "carol"):
        ids, cols, ys = linear_blobs(rng, 60, 3, f"{name[0]}", w)
        write_csv(ROOT / "horizontal_lr" / "data" / f"{name}.csv", ids,
                  ["x0", "x1", "x2"], cols, ys)


def vertical():
    rng = random.Random(20260802)
    ids, cols, ys = linear_blobs(rng, 80, 4, "r")
    write_csv(ROOT / "vertical" / "data" / "bank.csv", ids, ["x0", "x1"],
              cols[:2], ys)
    write_csv(ROOT / "vertical" / "data" / "fintech.csv", ids, ["x2", "x3"],
              cols[2:], None)


def local_pipeline():
    rng = random.Random(20260803)
    ids, cols, ys = linear_blobs(rng, 70, 3, "s")
    write_csv(ROOT / "local_pipeline" / "data" / "solo.csv", ids,
              ["x0", "x1", "x2"], cols, ys)


if __name__ == "__main__":
    horizontal()
    vertical()
    local_pipeline()
    print("demo data written")
