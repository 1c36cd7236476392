#!/usr/bin/env python3
# Copyright 2026 The fedgcn-sim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Convert Cora into the edge-list dataset directory read by fedgcn.

Two raw layouts are accepted:

  linqs      cora.content / cora.cites from the LINQS distribution
  planetoid  ind.cora.{x,y,tx,ty,allx,ally,graph,test.index}

Output: edges.txt, features.csv, labels.txt, manifest.json, split.json.
"""

import argparse
import json
import os
import pickle
import sys
import tempfile

import numpy as np


def write_atomic(path, text):
    d = os.path.dirname(path)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp_")
    with os.fdopen(fd, "w") as f:
        f.write(text)
    os.replace(tmp, path)


def load_linqs(src):
    ids, feats, names = [], [], []
    with open(os.path.join(src, "cora.content")) as f:
        for line in f:
            parts = line.split()
            if not parts:
                continue
            ids.append(parts[0])
            feats.append([float(v) for v in parts[1:-1]])
            names.append(parts[-1])
    index = {pid: i for i, pid in enumerate(ids)}
    classes = sorted(set(names))
    labels = np.array([classes.index(n) for n in names])
    edges = []
    with open(os.path.join(src, "cora.cites")) as f:
        for lineno, line in enumerate(f, 1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 2 or parts[0] not in index or parts[1] not in index:
                sys.exit(f"cora.cites:{lineno}: unknown node id")
            edges.append((index[parts[1]], index[parts[0]]))
    x = np.array(feats)
    split = first_per_class_split(labels, len(classes), 20, 500, 1000)
    return x, labels, len(classes), edges, split


def first_per_class_split(labels, num_classes, per_class, num_val, num_test):
    # Train: the first `per_class` nodes of every class in file order.
    # Validation and test follow in file order among the rest.
    train, seen = [], [0] * num_classes
    for i, y in enumerate(labels):
        if seen[y] < per_class:
            train.append(i)
            seen[y] += 1
    taken = set(train)
    rest = [i for i in range(len(labels)) if i not in taken]
    return {"train": train, "val": rest[:num_val], "test": rest[num_val:num_val + num_test]}


def load_planetoid(src, name="cora"):
    objs = []
    for part in ("x", "y", "tx", "ty", "allx", "ally", "graph"):
        with open(os.path.join(src, f"ind.{name}.{part}"), "rb") as f:
            objs.append(pickle.load(f, encoding="latin1"))
    x, y, tx, ty, allx, ally, graph = objs
    with open(os.path.join(src, f"ind.{name}.test.index")) as f:
        test_reorder = [int(line) for line in f if line.strip()]
    test_range = np.sort(test_reorder)

    feats = np.vstack((allx.toarray(), tx.toarray()))
    feats[test_reorder, :] = feats[test_range, :]
    onehot = np.vstack((ally, ty))
    onehot[test_reorder, :] = onehot[test_range, :]
    labels = onehot.argmax(axis=1)

    edges = set()
    for u, nbrs in graph.items():
        for v in nbrs:
            edges.add((min(u, v), max(u, v)))
    split = {
        "train": list(range(y.shape[0])),
        "val": list(range(y.shape[0], y.shape[0] + 500)),
        "test": [int(i) for i in test_range],
    }
    return feats, labels, onehot.shape[1], sorted(edges), split


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("src", help="directory holding the raw files")
    ap.add_argument("dst", help="output dataset directory")
    ap.add_argument("--format", choices=("linqs", "planetoid"), default="linqs")
    ap.add_argument("--normalize", action="store_true",
                    help="row-normalize the bag-of-words features (default keeps 0/1 values)")
    args = ap.parse_args()

    if args.format == "linqs":
        x, labels, num_classes, edges, split = load_linqs(args.src)
    else:
        x, labels, num_classes, edges, split = load_planetoid(args.src)
    if args.normalize:
        sums = x.sum(axis=1, keepdims=True)
        sums[sums == 0] = 1.0
        x = x / sums

    os.makedirs(args.dst, exist_ok=True)
    write_atomic(os.path.join(args.dst, "edges.txt"), "".join(f"{u} {v}\n" for u, v in edges))
    write_atomic(os.path.join(args.dst, "features.csv"),
                 "".join(",".join(repr(float(v)) for v in row) + "\n" for row in x))
    write_atomic(os.path.join(args.dst, "labels.txt"), "".join(f"{int(y)}\n" for y in labels))
    manifest = {"nodes": int(x.shape[0]), "edges": len(edges), "features": int(x.shape[1]),
                "classes": int(num_classes)}
    write_atomic(os.path.join(args.dst, "manifest.json"), json.dumps(manifest) + "\n")
    write_atomic(os.path.join(args.dst, "split.json"), json.dumps(split) + "\n")
    print(json.dumps(manifest))


if __name__ == "__main__":
    main()
