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

"""High-precision reference values for the loss, geometry and softmax fixtures.

Computed with mpmath at 50 significant digits, independently of the C++ code.
Run this script to regenerate the constants frozen in tests/unit and
tests/acceptance.
"""
from mpmath import mp, mpf, exp, log, sqrt, e

mp.dps = 50


def log_sigmoid(x):
    return -log(1 + exp(-x))


def bt_nll(rw, rl, gamma):
    return -log_sigmoid(rw - rl - gamma)


def log_softmax(logits):
    z = sum(exp(v) for v in logits)
    return [v - log(z) for v in logits]


def softmax(logits):
    z = sum(exp(v) for v in logits)
    return [exp(v) / z for v in logits]


def pl_nll(rewards, ranking, gamma):
    # ranking[k] is the 0-based index of the (k+1)-th best output.
    K = len(rewards)
    s = [rewards[ranking[k]] + (k + 1) * gamma for k in range(K)]
    total = mpf(0)
    for k in range(K):
        total += log(sum(exp(s[j]) for j in range(k, K))) - s[k]
    return total


def show(name, value):
    print(f"{name} = {mp.nstr(value, 25)}")


show("bt_nll(0,0,0)", bt_nll(0, 0, 0))
show("bt_nll(1,0,5)", bt_nll(1, 0, 5))

lp = log_softmax([mpf(1), mpf(0)])
show("log_pi[0]", lp[0])
show("log_pi[1]", lp[1])
rewards = [2 * v for v in lp]
show("reward[0]", rewards[0])
show("reward[1]", rewards[1])
show("pl_nll K=2 example", pl_nll(rewards, [0, 1], 5))

show("repeller two 0.5 entries", mpf(1) / (2 + mpf("1e-6")))
show("repeller two ones", mpf(2) / (2 + mpf("1e-6")))

show("simpo_reward(0.7310586, 2)", 2 * log(mpf("0.7310586")))
show("simpo_reward(1/e, 2)", 2 * log(1 / e))

fixture = [mpf("0.3"), mpf("-1.2"), mpf("2.5"), mpf("0.0"), mpf("1.1"), mpf("-0.4")]
for i, p in enumerate(softmax(fixture)):
    show(f"softmax_fixture[{i}]", p)

# top-3 of the fixture, renormalized
kept = sorted(range(len(fixture)), key=lambda i: -fixture[i])[:3]
sub = softmax([fixture[i] for i in kept])
print("top3 indices", kept)
for i, p in zip(kept, sub):
    show(f"top3_renorm[{i}]", p)

# three-mode PL loss with a permuted ranking, beta = 2, gamma = 5
logits3 = [mpf("0.2"), mpf("1.0"), mpf("-0.7")]
r3 = [2 * v for v in log_softmax(logits3)]
show("pl_nll 3-mode ranking (2,0,1)", pl_nll(r3, [2, 0, 1], 5))
show("pl_nll 3-mode ranking (1,0,2) gamma 0", pl_nll(r3, [1, 0, 2], 0))

# hand-set crossing distances: agent 0 moves along x, agent 1 along y
for t in range(3):
    a = (mpf(-1) + t, mpf(0))
    b = (mpf(0), mpf("-1.5") + mpf("1.25") * t)
    show(f"crossing distance t={t}", sqrt((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2))
