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

import json
import pathlib

import pytest

import evotest

FIXTURES = pathlib.Path(__file__).resolve().parents[2] / "fixtures"


def manifest(name):
    return json.loads((FIXTURES / name / "manifest.json").read_text())


def test_parse_summary():
    source = (FIXTURES / "gcd" / "program.mini").read_text()
    summary = evotest.parse_program(source)
    assert summary["functions"] == ["_abs", "gcd", "lcm"]
    assert summary["focal_functions"] == ["gcd", "lcm"]
    assert summary["statements"] == manifest("gcd")["statements"]


def test_parse_error_is_value_error():
    with pytest.raises(evotest.ParseError) as info:
        evotest.parse_program("fn f( {")
    assert isinstance(info.value, ValueError)


def test_fitness_scalar():
    assert evotest.fitness_scalar(50, 100, 80) == 75.0


@pytest.mark.parametrize("fixture", ["triangle", "boundary", "gcd"])
def test_score_matches_manifest(fixture):
    result = evotest.score(FIXTURES / fixture / "program.mini",
                           FIXTURES / fixture / "suite.test.mini")
    expected = manifest(fixture)["suites"]["suite.test.mini"]
    assert result["scalar"] == pytest.approx(expected["scalar"], abs=1e-9)
    assert result["msct"] == pytest.approx(expected["msct"], abs=1e-9)
    assert result["size"]["methods"] == expected["size"]["methods"]


def test_mutant_listing():
    lines = evotest.mutants(str(FIXTURES / "triangle" / "program.mini"))
    assert len(lines) == manifest("triangle")["all_mutant_count"]
    assert all(" -> " in line for line in lines)


def test_render_prompt():
    system, user = evotest.render_prompt(
        "repair", {"stacktrace": "ERROR boom", "test_suite": "test t() {}",
                   "source_code": "fn f() {}"})
    assert "ERROR boom" in user
    assert system == ""  # repair reuses the generating agent's prompt
    system, user = evotest.render_prompt(
        "gen_A1", {"focal_methods": "gcd(a, b)", "source_code": "fn gcd(a, b) {}"})
    assert system and "gcd(a, b)" in user
    with pytest.raises(evotest.TemplateError):
        evotest.render_prompt("gen_A2", {"focal_methods": "", "source_code": "x"})
    with pytest.raises(ValueError):
        evotest.render_prompt("nope", {})


def test_run_small_config():
    config = {
        "program": str(FIXTURES / "leap_year" / "program.mini"),
        "backend": {"kind": "mock", "seed": 3},
        "population": {"samples_per_strategy": 1},
        "ga": {"max_generations": 5, "time_budget_seconds": 60},
    }
    report = evotest.run(config)
    assert report["schema_version"] == evotest.REPORT_SCHEMA_VERSION
    assert len(report["initial_population"]) == 5
    assert report["final"]["fitness"]["scalar"] >= \
        report["final"]["best_initial_fitness"]["scalar"]
    again = evotest.run(config)
    assert again["final"]["source"] == report["final"]["source"]


def test_run_rejects_bad_config():
    with pytest.raises(evotest.ConfigError):
        evotest.run({"program": "/nonexistent.mini",
                     "backend": {"kind": "mock", "seed": 1}})
    with pytest.raises(evotest.ConfigError):
        evotest.run({"program": "x", "unknown": 1})
