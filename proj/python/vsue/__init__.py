# Copyright 2026 The vsue-sim Authors
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

"""Two-way VSUE and two-way QKD simulator.

Thin wrapper over the compiled core. Functions return plain dicts and lists.
"""

import json

from . import _vsue
from ._vsue import (
    ConfigError,
    DomainError,
    binary_entropy,
    default_delta,
    error_rates,
    j_entropy,
    lm05_rate,
    max_message_length,
    monitor_sample,
    qkd_rate,
    qkd_rate_from_states,
    rate_qkd_refresh,
    rate_table,
    rate_vsue_refresh,
    reject_case_max,
    run_cli,
    solve_check_b,
    star,
    theorem_bounds,
    verify_lemmas,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "binary_entropy",
    "default_delta",
    "error_rates",
    "j_entropy",
    "lm05_rate",
    "max_message_length",
    "monitor_sample",
    "qkd_rate",
    "qkd_rate_from_states",
    "rate_qkd_refresh",
    "rate_table",
    "rate_vsue_refresh",
    "reject_case_max",
    "run_cli",
    "simulate",
    "solve_check_b",
    "star",
    "theorem_bounds",
    "verify_lemmas",
]

__version__ = "0.1.0"


def simulate(config=None, jobs=1, **overrides):
    """Run trials for a config dict (same keys as the JSON config file).

    Keyword overrides are merged on top, e.g. simulate(trials=50, seed=3).
    """
    doc = dict(config or {})
    doc.update(overrides)
    return _vsue.simulate_json(json.dumps(doc), jobs)

