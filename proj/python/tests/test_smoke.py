# Copyright 2026 The spinlab Authors
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

import json
import math

import numpy as np
import pytest

import spinlab as sl


def test_cnot_counts_match_reference():
    spec = sl.ChainSpec(20)
    counts = [sl.cnot_count(sl.lower(sl.build(spec, sl.TrotterPlan(sl.TrotterOrder.SECOND_MERGED, m, 0.1))))
              for m in range(1, 9)]
    assert counts == [87, 144, 201, 258, 315, 372, 429, 486]
    ok, text = sl.tables()
    assert ok and "0 of 32" in text


def test_depth_per_step():
    plan = sl.TrotterPlan(sl.TrotterOrder.FIRST, 3, 0.1)
    assert sl.depth_per_step(sl.ChainSpec(12, j2=0.5), plan) == (7, 0)
    assert sl.depth_per_step(sl.ChainSpec(12), plan) == (2, 0)


def test_neel_and_norm():
    amps = sl.neel_amplitudes(4)
    assert amps[0b1010] == 1
    c = sl.build(sl.ChainSpec(6, sl.Boundary.PERIODIC), sl.TrotterPlan(sl.TrotterOrder.SECOND_MERGED, 3, 0.4))
    psi = sl.simulate(c)
    assert math.isclose(np.vdot(psi, psi).real, 1.0, abs_tol=1e-12)


def test_unitary_is_unitary():
    c = sl.lower(sl.build(sl.ChainSpec(4), sl.TrotterPlan(sl.TrotterOrder.FIRST, 1, 0.3)))
    u = c.unitary()
    assert np.allclose(u.conj().T @ u, np.eye(16), atol=1e-12)


def test_backends_agree():
    spec = sl.ChainSpec(10)
    c = sl.build(spec, sl.TrotterPlan(sl.TrotterOrder.SECOND_MERGED, 4, 0.2))
    sv = sl.statevector_series(c)
    mps = sl.mps_series(c, chi_max=64)
    exact = sl.exact_series(spec, 0.2, 4)
    assert np.allclose(sv, mps, atol=1e-9)
    assert np.allclose(sv, exact, atol=1e-2)


def test_text_round_trip():
    c = sl.build(sl.ChainSpec(4), sl.TrotterPlan(sl.TrotterOrder.FIRST, 2, 0.1))
    assert sl.Circuit.from_text(c.to_text()).to_text() == c.to_text()


def test_twirl_and_zne():
    tuples = sl.twirl_set()
    assert len(tuples) == 16 and "IIII" in tuples and "ZXZX" in tuples
    assert math.isclose(sl.zne_extrapolate([0.9, 0.7, 0.5], [1, 3, 5]), 1.0, abs_tol=1e-12)
    assert math.isclose(sl.m3_mitigate({0: 90, 1: 10}, [(0.0, 0.0)], 1), 0.5 * 0.8 * 1.0, abs_tol=1e-12)


def test_errors_are_typed():
    with pytest.raises(sl.SpecError):
        sl.ChainSpec(7)
    with pytest.raises(sl.ConfigError):
        sl.run_config("[chain]\nsites = 8\n[nope]\n")
    with pytest.raises(sl.Error):
        sl.fold(sl.lower(sl.build(sl.ChainSpec(4), sl.TrotterPlan())), 2)


def test_run_config():
    csv, text = sl.run_config("[chain]\nsites = 6\n[plan]\norder = second-merged\ndt = 0.3\nsteps = 2\n", seed=1)
    assert csv.splitlines()[0].startswith("step,t,")
    doc = json.loads(text)
    assert doc["schema_version"] == 1
    assert len(doc["rows"]) == 2
