# Copyright 2026 The Evotest Authors
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
"""Python bindings for the evotest test generator."""

import json
import os

from . import _core
from ._core import (
    REPORT_SCHEMA_VERSION,
    ConfigError,
    ParseError,
    TemplateError,
    fitness_scalar,
    mutants,
    parse_program,
    render_prompt,
)

__all__ = [
    "REPORT_SCHEMA_VERSION",
    "ConfigError",
    "ParseError",
    "TemplateError",
    "fitness_scalar",
    "mutants",
    "parse_program",
    "render_prompt",
    "run",
    "score",
]


def score(program_path, suite_path, step_budget=None):
    """Fitness of a test file against a program, as a dict."""
    args = [os.fspath(program_path), os.fspath(suite_path)]
    if step_budget is not None:
        args.append(step_budget)
    return json.loads(_core.score_json(*args))


def run(config):
    """Runs the full pipeline. `config` is a dict in the JSON config format."""
    return json.loads(_core.run_json(json.dumps(config)))
