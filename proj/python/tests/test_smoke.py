# Copyright 2026 The nfba Authors
# SPDX-License-Identifier: Apache-2.0
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import numpy as np
import pytest

import nfba


def test_constants():
    cfg = nfba.ArrayConfig()
    assert abs(cfg.noise_dbm - (-84.70581)) < 1e-3
    assert abs(cfg.rayleigh_distance - 348.35) < 0.1
    assert nfba.input_length(cfg, 0.1) == 49
    assert nfba.FineNet().trainable_count == 81888


def test_fresnel_limit_and_symmetry():
    c, s = nfba.fresnel(0.0)
    assert c == 0.0 and s == 0.0
    c1, s1 = nfba.fresnel(1.3)
    c2, s2 = nfba.fresnel(-1.3)
    assert c1 == -c2 and s1 == -s2
    c, s = nfba.fresnel(1e4)
    half = 0.5 * math.sqrt(math.pi / 2.0)
    assert abs(c - half) < 1e-3 and abs(s - half) < 1e-3


def test_channel_and_coarse_alignment():
    cfg = nfba.ArrayConfig()
    cfg.noise_psd_dbm_per_hz = -300.0
    theta = cfg.grid_angle(150)
    h = nfba.steering_vector(theta, 12.0, cfg)
    assert h.dtype == np.complex128 and h.shape == (256,)
    assert np.isclose(np.linalg.norm(h), 1.0)
    y = nfba.measure(h, 1.0, 0.0, cfg=cfg)
    res = nfba.coarse_align(y, 1.0, cfg)
    assert res.center_index == 150
    assert 150 in res.subspace
    assert len(res.subspace) == 2 * res.half_width + 1


def test_flops():
    assert nfba.flops.coarse(256) == 4359
    assert nfba.flops.fine(49) == 755372
    assert nfba.flops.dnbt(256, 16, 16, 20) == 295056463


def test_network_forward_is_a_distribution():
    net = nfba.FineNet()
    net.init(3)
    x = [0.1 * k for k in range(10)] + [0.0] * 39
    mask = [1] * 10 + [0] * 39
    p = net.forward(x, mask)
    assert len(p) == 49
    assert abs(sum(p) - 1.0) < 1e-12
    assert all(v == 0.0 for v in p[10:])


def test_simulation_rows():
    cfg = nfba.parse_config("p_t_dbm = 0, 10\ntrials = 3\nseed = 5\nschemes = proposed-coarse, ls\n")
    rows = nfba.simulate(cfg, threads=1)
    assert len(rows) == 4
    assert {r["scheme"] for r in rows} == {"proposed-coarse", "ls"}
    assert all(r["trials"] == 3 for r in rows)
    csv = nfba.simulate_csv(cfg, threads=1)
    assert csv.splitlines()[0].startswith("scheme,p_t_dbm,")


def test_config_error():
    with pytest.raises(nfba.ConfigError):
        nfba.parse_config("trials = -1\n")
