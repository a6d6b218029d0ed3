#!/usr/bin/env python3
# Copyright 2026 The trajpref Authors
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

"""Independent recomputation of dataset metrics from a scene file and a
prediction dump, compared against an eval report written by the CLI.

usage: dataset_metrics_oracle.py SCENES PREDICTIONS REPORT_JSON [--top-n N] [--threshold R]
"""
import argparse
import json
import sys

import numpy as np


def read_records(path):
    with open(path) as f:
        lines = [json.loads(line) for line in f if line.strip()]
    if not lines or lines[0].get("record") != "header":
        raise SystemExit(f"{path}: missing header record")
    return lines[1:]


def scene_metrics(gt, agents, top_n, threshold):
    # gt: (A, T, 2); agents: list of {"logits": [K], "trajectories": [K][T][2]}
    logits = np.array([a["logits"] for a in agents], dtype=float)  # (A, K)
    trajs = np.array([a["trajectories"] for a in agents], dtype=float)  # (A, K, T, 2)
    n_agents, k = logits.shape
    order = np.argsort(-logits, axis=1, kind="stable")  # rank -> mode per agent
    rows = np.arange(n_agents)[:, None]
    joint_logits = logits[rows, order].mean(axis=0)  # (K,)
    joint = trajs[rows, order]  # (A, K, T, 2)

    p = np.exp(joint_logits - joint_logits.max())
    p /= p.sum()
    keep = np.argsort(-p, kind="stable")[:top_n]
    probs = p[keep] / p[keep].sum()
    modes = joint[:, keep]  # (A, n, T, 2)

    diff = modes[:, None] - modes[None, :]  # (A, A, n, T, 2)
    dist = np.sqrt((diff ** 2).sum(-1))
    iu = np.triu_indices(n_agents, 1)
    if n_agents > 1:
        collided = (dist[iu] < threshold).any(axis=(0, 2))  # (n,)
    else:
        collided = np.zeros(len(keep), dtype=bool)
    fde = np.sqrt(((modes[:, :, -1] - gt[:, None, -1]) ** 2).sum(-1)).mean(axis=0)  # (n,)
    return collided.mean(), probs[collided].sum(), fde.min(), fde.mean()


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("scenes")
    ap.add_argument("predictions")
    ap.add_argument("report")
    ap.add_argument("--top-n", type=int, default=6)
    ap.add_argument("--threshold", type=float, default=1.0)
    ap.add_argument("--tol", type=float, default=1e-9)
    args = ap.parse_args()

    preds = {r["scene_id"]: r["agents"] for r in read_records(args.predictions)}
    rows = []
    for scene in read_records(args.scenes):
        gt = np.array(scene["ground_truth_futures"], dtype=float)
        rows.append(scene_metrics(gt, preds[scene["scene_id"]], args.top_n, args.threshold))
    mean = np.array(rows).mean(axis=0)
    expected = dict(zip(("scr", "pscr", "min_joint_fde", "avg_fde"), mean))

    with open(args.report) as f:
        report = json.load(f)
    bad = 0
    for name, value in expected.items():
        got = report[name]
        ok = abs(got - value) <= args.tol * max(1.0, abs(value))
        bad += not ok
        print(f"{'ok ' if ok else 'BAD'} {name}: oracle {value:.17g} report {got:.17g}")
    if report["n_scenes"] != len(rows):
        print(f"BAD n_scenes: {report['n_scenes']} vs {len(rows)}")
        bad += 1
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
