"""
funtf-potential - frame potentials on finite-dimensional Banach spaces
Command-line entry point

Builds a task from argv, dispatches it through the component registry and
prints either an aligned table or the JSON result. Exit codes: 0 success,
1 domain error (JSON error object on stdout), 2 usage error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any

from src.components.analysis_component import AnalysisComponent
from src.components.base_component import ComponentRegistry
from src.components.construction_component import FAMILIES, ConstructionComponent
from src.components.reference_component import ReferenceComponent
from src.config.logging_config import setup_logging
from src.core.errors import InvalidInputError

logger = logging.getLogger("funtf-main")

EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_USAGE = 2


def load_json(value: str | None, what: str) -> Any:
    """Inline JSON, or @path to a JSON file."""
    if value is None:
        return None
    try:
        if value.startswith("@"):
            return json.loads(Path(value[1:]).read_text(encoding="utf-8"))
        return json.loads(value)
    except OSError as e:
        raise InvalidInputError(f"cannot read {what} file: {e}") from e
    except json.JSONDecodeError as e:
        raise InvalidInputError(f"malformed JSON for {what}: {e.msg}") from e


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the JSON result")
    common.add_argument("--output", help="also write the JSON result to this file")
    common.add_argument("--log-level", default=None, help="override FUNTF_LOG_LEVEL")

    parser = argparse.ArgumentParser(
        prog="funtf",
        description="2-summing norms, frame potentials and FUNTF constructions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pi2", parents=[common], help="2-summing norm of an operator")
    p.add_argument("--space", required=True, help="domain SpaceSpec (JSON or @file)")
    p.add_argument("--range", help="range SpaceSpec, defaults to the domain")
    p.add_argument("--op", default="identity", help='"identity" or a JSON matrix')
    p.add_argument("--tol", type=float)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("potential", parents=[common], help="frame potential π₂(S)²")
    p.add_argument("--frame", required=True, help="FrameSystem (JSON or @file)")
    p.add_argument("--tol", type=float)

    p = sub.add_parser("classify", parents=[common], help="classify a frame system")
    p.add_argument("--frame", required=True)
    p.add_argument("--tol", type=float)

    p = sub.add_parser("construct", parents=[common], help="build a FUNTF")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--space")
    p.add_argument("--dim", type=int)
    p.add_argument("--len", type=int)
    p.add_argument("--lambdas", help="JSON list of diagonal entries")
    p.add_argument("--seed", type=int)

    p = sub.add_parser("erasure", parents=[common], help="maximal erasure error")
    p.add_argument("--frame", required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--full-table", action="store_true")
    p.add_argument("--optimal", action="store_true", help="test one-erasure optimality")
    p.add_argument("--threads", type=int)
    p.add_argument("--tol", type=float)

    p = sub.add_parser(
        "smoothness",
        parents=[common],
        help="check tr(S) < √n near I/√n (gap taken against the lower π₂ endpoint)",
    )
    p.add_argument("--space", required=True)
    p.add_argument("--trials", type=int, default=25)
    p.add_argument("--seed", type=int)
    p.add_argument(
        "--tol",
        type=float,
        help="π₂ interval width; gaps use the lower endpoint, the stricter side",
    )

    p = sub.add_parser("verify-paper", parents=[common], help="run the reference checks")
    p.add_argument("--check", action="append", help="run only this check id (repeatable)")
    p.add_argument("--list", action="store_true", help="list check ids")

    p = sub.add_parser("search", parents=[common], help="numerical FUNTF search")
    p.add_argument("--space", required=True)
    p.add_argument("--len", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--max-iters", type=int)
    p.add_argument("--restarts", type=int)
    p.add_argument("--avoid", type=float, help="keep every |coordinate| at least this")
    p.add_argument("--threads", type=int)

    return parser


def build_task(args: argparse.Namespace) -> dict[str, Any]:
    command = args.command
    if command == "verify-paper":
        if args.list:
            return {"task_type": "list-checks"}
        return {"task_type": "verify-paper", "checks": args.check}

    task: dict[str, Any] = {"task_type": command}
    for key in ("tol", "seed", "m", "full_table", "optimal", "threads", "trials",
                "family", "dim", "len", "max_iters", "restarts", "avoid", "op"):
        if hasattr(args, key):
            task[key] = getattr(args, key)
    for key in ("space", "range", "frame", "lambdas"):
        if hasattr(args, key):
            task[key] = load_json(getattr(args, key), key)
    if isinstance(task.get("op"), str) and task["op"] != "identity":
        task["op"] = load_json(task["op"], "op")
    return task


def _cell(value: Any, width: int = 72) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, dict | list):
        text = json.dumps(value, separators=(",", ":"))
        return text if len(text) <= width else text[: width - 3] + "..."
    return str(value)


def render_table(result: dict[str, Any]) -> str:
    """Aligned two-column table, or one row per check for the reference suite."""
    if "checks" in result and isinstance(result["checks"], list):
        rows = [("check", "status", "observed", "expected")]
        for check in result["checks"]:
            rows.append(
                (
                    check["check_id"],
                    "pass" if check["passed"] else "FAIL",
                    _cell(check["observed"], 48),
                    _cell(check["expected"], 32),
                )
            )
        widths = [max(len(row[i]) for row in rows) for i in range(4)]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)) for row in rows]
        lines.append(f"wall time: {result['wall_time_seconds']:.1f}s")
        return "\n".join(lines)

    width = max((len(key) for key in result), default=0)
    return "\n".join(f"{key.ljust(width)}  {_cell(value)}" for key, value in result.items())


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    setup_logging(args.log_level)

    registry = ComponentRegistry()
    for component in (AnalysisComponent(), ConstructionComponent(), ReferenceComponent()):
        registry.register_component(component)

    try:
        envelope = registry.dispatch(build_task(args))
    except InvalidInputError as e:
        print(json.dumps(e.to_dict(), indent=2))
        return EXIT_DOMAIN_ERROR

    if envelope["status"] == "error":
        print(json.dumps(envelope["error"], indent=2))
        return EXIT_DOMAIN_ERROR

    result = envelope["result"]
    text = json.dumps(result, indent=2)
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    print(text if args.json else render_table(result))
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
