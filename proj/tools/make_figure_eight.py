#!/usr/bin/env python3
# Copyright 2026 The gvfnav Authors
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

"""Writes the closed C2 figure-eight spline used by configs/paper_sim.json.

Each degree-5 segment i interpolates g(s) = (A sin(2 pi s/3), B sin(4 pi s/3))
at s = i and s = i + 1 together with g' and g'', so the three segments join
with C2 continuity, including the wrap from segment 2 back to segment 0.
Locked points of segments 1 and 2 are recomputed with the joint recurrences
in the same floating-point order as the C++ loader, so loading reports no
repairs.
"""

import argparse
import json
import math


def figure_eight(a, b):
    w1, w2 = 2 * math.pi / 3, 4 * math.pi / 3
    g = lambda s: (a * math.sin(w1 * s), b * math.sin(w2 * s))
    dg = lambda s: (a * w1 * math.cos(w1 * s), b * w2 * math.cos(w2 * s))
    ddg = lambda s: (-a * w1 * w1 * math.sin(w1 * s),
                     -b * w2 * w2 * math.sin(w2 * s))
    return g, dg, ddg


def build(a, b, n=5, segments=3):
    g, dg, ddg = figure_eight(a, b)
    out = []
    for i in range(segments):
        p0, p5 = g(i), g(i + 1)
        d0, d5 = dg(i), dg(i + 1)
        e0, e5 = ddg(i), ddg(i + 1)
        p1 = tuple(p0[k] + d0[k] / n for k in range(2))
        p2 = tuple(2 * p1[k] - p0[k] + e0[k] / (n * (n - 1)) for k in range(2))
        p4 = tuple(p5[k] - d5[k] / n for k in range(2))
        p3 = tuple(2 * p4[k] - p5[k] + e5[k] / (n * (n - 1)) for k in range(2))
        seg = [p0, p1, p2, p3, p4, p5]
        if out:
            prev = out[-1]
            seg[0] = prev[5]
            seg[1] = tuple(2.0 * prev[5][k] - prev[4][k] for k in range(2))
            seg[2] = tuple(4.0 * prev[5][k] - 4.0 * prev[4][k] + prev[3][k]
                           for k in range(2))
        out.append([tuple(0.0 if abs(c) < 1e-12 else c for c in q) for q in seg])
    return out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--a", type=float, default=8.0)
    parser.add_argument("--b", type=float, default=5.0)
    args = parser.parse_args()
    segs = build(args.a, args.b)
    doc = {
        "degree": 5,
        "continuity": "C2",
        "segments": [{"points": [list(p) for p in s]} for s in segs],
    }
    print(json.dumps(doc, indent=2))


if __name__ == "__main__":
    main()
