#!/usr/bin/env python3
# Copyright 2026 The docstitch Authors.
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

"""Naive reference for `score --fraction P --scorer mock`.

Reads sub-document records, scores every sub-document by the mean trigram
Jaccard similarity over windows of three consecutive segments (stride one,
one whole-document window when shorter), rounds to four decimals and prints
the kept sub-documents in rank order as "sub_doc_id<TAB>score".
"""

import math
import sys


def trigrams(text):
    cps = text.lower()
    return {cps[i:i + 3] for i in range(len(cps) - 2)}


def jaccard(a, b):
    ta, tb = trigrams(a), trigrams(b)
    return len(ta & tb) / max(1, len(ta | tb))


def doc_score(segments, window=3):
    n = len(segments)
    starts = [0] if n < window else range(n - window + 1)
    scores = []
    for i in starts:
        chunk = segments[i:i + window]
        scores.append(jaccard(" ".join(s for s, _ in chunk), " ".join(t for _, t in chunk)))
    total = 0.0
    for s in scores:
        total += s
    return total / len(scores)


def main(path, fraction):
    docs = {}
    order = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            cols = line.rstrip("\n").split("\t")
            sub = cols[17]
            if sub not in docs:
                docs[sub] = []
                order.append(sub)
            docs[sub].append((cols[3], cols[4]))
    scored = [(math.floor(doc_score(docs[s]) * 10000 + 0.5) / 10000, s) for s in order]
    scored.sort(key=lambda x: (-x[0], x[1]))
    keep = math.floor(fraction * len(scored) + 0.5)
    for score, sub in scored[:keep]:
        print(f"{sub}\t{score:.4f}")


if __name__ == "__main__":
    main(sys.argv[1], float(sys.argv[2]))
