"""
Integration tests for the component registry and the funtf command line.
"""

import json
import math

import numpy as np
import pytest

from src.components.analysis_component import AnalysisComponent, parse_operator
from src.components.base_component import ComponentRegistry, ComponentStatus
from src.components.construction_component import ConstructionComponent
from src.components.reference_component import ReferenceComponent
from src.core.errors import DimensionMismatchError, InvalidInputError
from src.main import EXIT_DOMAIN_ERROR, EXIT_OK, EXIT_USAGE, render_table, run
from src.models.space import SpaceSpec

L1_2 = json.dumps({"dim": 2, "norm": {"kind": "lp", "p": 1}})


@pytest.fixture
def registry() -> ComponentRegistry:
    registry = ComponentRegistry()
    for component in (AnalysisComponent(), ConstructionComponent(), ReferenceComponent()):
        registry.register_component(component)
    return registry


class TestComponentRegistry:
    """Routing and the result envelope"""

    def test_success_envelope(self, registry, x_frame):
        envelope = registry.dispatch({"task_type": "classify", "frame": x_frame.model_dump()})
        assert envelope["status"] == "success"
        assert envelope["component_id"] == "analysis_001"
        assert envelope["result"]["kind"] == "funtf"
        assert envelope["result"]["naive_potential_sq"] == pytest.approx(5.625)
        assert envelope["execution_time_seconds"] >= 0

    def test_error_envelope(self, registry, x_frame):
        envelope = registry.dispatch(
            {"task_type": "erasure", "frame": x_frame.model_dump(), "m": 3}
        )
        assert envelope["status"] == "error"
        assert envelope["error"]["type"] == "invalid_input"

    def test_invalid_model_becomes_domain_error(self, registry):
        envelope = registry.dispatch({"task_type": "pi2", "space": {"dim": 0}})
        assert envelope["status"] == "error"
        assert envelope["error"]["type"] == "invalid_input"

    def test_metrics(self, registry, x_frame):
        registry.dispatch({"task_type": "classify", "frame": x_frame.model_dump()})
        registry.dispatch({"task_type": "classify", "frame": None})
        status = registry.get_all_statuses()["analysis_001"]
        assert status["status"] == ComponentStatus.READY.value
        assert status["metrics"]["classify"]["total_executed"] == 2
        assert status["metrics"]["classify"]["total_failed"] == 1

    def test_unknown_task_type(self, registry):
        with pytest.raises(InvalidInputError):
            registry.dispatch({"task_type": "teleport"})

    def test_duplicate_route(self, registry):
        with pytest.raises(ValueError):
            registry.register_component(AnalysisComponent(component_id="analysis_002"))

    def test_construct_envelope(self, registry):
        envelope = registry.dispatch({"task_type": "construct", "family": "ell1-n+1", "dim": 3})
        result = envelope["result"]
        assert result["classification"]["kind"] == "funtf"
        assert len(result["frame"]["pairs"]) == 4

    def test_missing_family_argument(self, registry):
        envelope = registry.dispatch({"task_type": "construct", "family": "ell1-special", "dim": 3})
        assert envelope["status"] == "error"
        assert "--len" in envelope["error"]["message"]


class TestParseOperator:
    def test_identity(self, l1_2):
        np.testing.assert_array_equal(parse_operator("identity", l1_2, l1_2), np.eye(2))

    def test_identity_needs_square(self, l1_2):
        with pytest.raises(DimensionMismatchError):
            parse_operator("identity", l1_2, SpaceSpec.lp(3, 1))

    def test_unknown_shorthand(self, l1_2):
        with pytest.raises(InvalidInputError):
            parse_operator("zero", l1_2, l1_2)

    def test_complex_matrix(self):
        space = SpaceSpec.lp(1, 1, field="complex")
        matrix = parse_operator([[[0.0, 2.0]]], space, space)
        assert matrix[0, 0] == 2j


class TestCommandLine:
    """run(argv) exit codes and output"""

    def test_pi2_identity_example(self, capsys):
        code = run(["pi2", "--space", L1_2, "--op", "identity", "--tol", "1e-4", "--json"])
        assert code == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["certified"] is True
        assert payload["lower"] - 1e-12 <= math.sqrt(2.0) <= payload["upper"] + 1e-12
        assert payload["upper"] - payload["lower"] <= 1e-4

    def test_pi2_json(self, capsys):
        code = run(["pi2", "--space", L1_2, "--json"])
        assert code == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["lower"] == pytest.approx(math.sqrt(2.0), rel=1e-6)
        assert payload["certified"] is True

    def test_pi2_with_matrix(self, capsys):
        code = run(["pi2", "--space", L1_2, "--op", "[[2, 0], [0, 1]]", "--json"])
        assert code == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["lower"] >= 2.2

    def test_table_output(self, capsys, x_frame):
        code = run(["classify", "--frame", json.dumps(x_frame.model_dump())])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "kind" in out
        assert "funtf" in out

    def test_frame_from_file(self, capsys, tmp_path, y_frame):
        path = tmp_path / "frame.json"
        path.write_text(json.dumps(y_frame.model_dump()), encoding="utf-8")
        code = run(["classify", "--frame", f"@{path}", "--json"])
        assert code == EXIT_OK
        assert json.loads(capsys.readouterr().out)["kind"] == "approximate"

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "result.json"
        code = run(
            ["construct", "--family", "ell1-special", "--dim", "3", "--len", "5",
             "--output", str(target)]
        )
        assert code == EXIT_OK
        saved = json.loads(target.read_text(encoding="utf-8"))
        assert saved["classification"]["kind"] == "funtf"
        capsys.readouterr()

    def test_domain_error_exit_code(self, capsys):
        code = run(["construct", "--family", "ell1-special", "--dim", "5", "--len", "7"])
        assert code == EXIT_DOMAIN_ERROR
        error = json.loads(capsys.readouterr().out)
        assert error["type"] == "unsupported_construction"

    def test_malformed_json(self, capsys):
        code = run(["pi2", "--space", "{not json"])
        assert code == EXIT_DOMAIN_ERROR
        assert json.loads(capsys.readouterr().out)["type"] == "invalid_input"

    def test_missing_file(self, capsys, tmp_path):
        code = run(["potential", "--frame", f"@{tmp_path / 'absent.json'}"])
        assert code == EXIT_DOMAIN_ERROR
        capsys.readouterr()

    def test_usage_error(self, capsys):
        assert run(["pi2"]) == EXIT_USAGE
        assert run(["construct", "--family", "nonsense"]) == EXIT_USAGE
        capsys.readouterr()

    def test_help(self, capsys):
        assert run(["--help"]) == EXIT_OK
        assert "frame potentials" in capsys.readouterr().out

    def test_smoothness_help_names_the_endpoint(self, capsys):
        assert run(["smoothness", "--help"]) == EXIT_OK
        assert "lower" in capsys.readouterr().out

    def test_list_checks(self, capsys):
        code = run(["verify-paper", "--list", "--json"])
        assert code == EXIT_OK
        checks = json.loads(capsys.readouterr().out)["checks"]
        assert "frameFail-sq" in checks
        assert "parity-l1-2" in checks

    def test_single_check_table(self, capsys):
        code = run(["verify-paper", "--check", "frameFail-sq", "--check", "y-frame-not-funtf"])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "frameFail-sq" in out
        assert "FAIL" not in out
        assert "wall time" in out

    def test_unknown_check(self, capsys):
        code = run(["verify-paper", "--check", "no-such-check"])
        assert code == EXIT_DOMAIN_ERROR
        capsys.readouterr()


class TestRenderTable:
    def test_key_value_rows(self):
        text = render_table({"value": 0.5, "argmax_subset": [1, 2]})
        lines = text.splitlines()
        assert lines[0].startswith("value")
        assert lines[1].endswith("[1,2]")

    def test_long_values_are_truncated(self):
        text = render_table({"witness": list(range(100))})
        assert text.endswith("...")


class TestSeeds:
    """The same --seed reproduces the same JSON"""

    def _run_twice(self, capsys, argv: list[str]) -> tuple[dict, dict]:
        outputs = []
        for _ in range(2):
            assert run(argv) == EXIT_OK
            outputs.append(json.loads(capsys.readouterr().out))
        return outputs[0], outputs[1]

    def test_search(self, capsys):
        l2_2 = json.dumps({"dim": 2, "norm": {"kind": "lp", "p": 2}})
        first, second = self._run_twice(
            capsys,
            ["search", "--space", l2_2, "--len", "3", "--seed", "3", "--restarts", "2",
             "--json"],
        )
        assert first == second
        assert first["seed"] == 3

    def test_smoothness(self, capsys):
        l2_3 = json.dumps({"dim": 3, "norm": {"kind": "lp", "p": 2}})
        first, second = self._run_twice(
            capsys, ["smoothness", "--space", l2_3, "--trials", "4", "--seed", "3", "--json"]
        )
        assert first == second
        assert first["trials"] == 4

    def test_different_seeds_differ(self, capsys):
        l2_3 = json.dumps({"dim": 3, "norm": {"kind": "lp", "p": 2}})
        outputs = []
        for seed in ("3", "4"):
            assert run(["smoothness", "--space", l2_3, "--trials", "4", "--seed", seed,
                        "--json"]) == EXIT_OK
            outputs.append(json.loads(capsys.readouterr().out))
        assert outputs[0]["gaps"] != outputs[1]["gaps"]
