"""
Reference Component for funtf-potential
Runs the bundled reference suite
"""

from typing import Any

from ..core.errors import InvalidInputError
from ..services.reference_checks import available_checks, run_reference_checks
from .base_component import BaseComponent


class ReferenceComponent(BaseComponent):
    task_types = ("verify-paper", "list-checks")

    def __init__(
        self,
        component_id: str = "reference_001",
        name: str = "ReferenceComponent",
        version: str = "1.0.0",
    ):
        super().__init__(component_id, name, version)

    def execute(self, task_data: dict[str, Any]) -> dict[str, Any]:
        task_type = task_data.get("task_type", "unknown")
        if task_type == "list-checks":
            return {"checks": available_checks()}
        if task_type != "verify-paper":
            raise InvalidInputError(f"Unknown reference task type: {task_type}")

        report = run_reference_checks(task_data.get("checks") or None)
        payload = report.model_dump(mode="json")
        payload["passed"] = report.passed
        payload["failed"] = report.failed
        return payload
