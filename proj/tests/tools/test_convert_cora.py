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

"""End-to-end check: fake LINQS files -> converter -> fedgcn train."""

import json
import os
import subprocess
import sys
import tempfile

here = os.path.dirname(os.path.abspath(__file__))
converter = os.path.join(here, "..", "..", "tools", "convert_cora.py")
cli = sys.argv[1]

with tempfile.TemporaryDirectory() as tmp:
    raw = os.path.join(tmp, "raw")
    os.makedirs(raw)
    classes = ["Theory", "Neural_Networks", "Rule_Learning"]
    n, d = 600, 6
    with open(os.path.join(raw, "cora.content"), "w") as f:
        for i in range(n):
            bits = ["1" if (i + j) % 4 == 0 else "0" for j in range(d)]
            f.write(f"p{1000 + i}\t" + "\t".join(bits) + f"\t{classes[i % 3]}\n")
    with open(os.path.join(raw, "cora.cites"), "w") as f:
        for i in range(n):
            f.write(f"p{1000 + i}\tp{1000 + (i + 3) % n}\n")
        f.write(f"p{1000}\tp{1003}\n")  # duplicate record

    out = os.path.join(tmp, "cora")
    subprocess.run([sys.executable, converter, raw, out, "--normalize"], check=True)
    manifest = json.load(open(os.path.join(out, "manifest.json")))
    assert manifest == {"nodes": n, "edges": n + 1, "features": d, "classes": 3}, manifest
    split = json.load(open(os.path.join(out, "split.json")))
    assert [len(split[k]) for k in ("train", "val", "test")] == [60, 500, 40], split
    row = [float(v) for v in open(os.path.join(out, "features.csv")).readline().split(",")]
    assert abs(sum(row) - 1.0) < 1e-12, row

    cfg = os.path.join(tmp, "cfg.json")
    json.dump({"data": {"dataset": out}, "clients": 3, "training": {"rounds": 3}}, open(cfg, "w"))
    subprocess.run([cli, "train", "--config", cfg, "--out", os.path.join(tmp, "run")], check=True)
    summary = json.load(open(os.path.join(tmp, "run", "summary.json")))
    assert summary["runs"][0]["final_test_acc"] is not None
print("ok")
