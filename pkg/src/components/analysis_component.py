"""
Analysis Component for funtf-potential
Handles 2-summing norms, frame potentials, classification, erasures and smoothness probes
"""

import logging
from typing import Any

import numpy as np

from ..core.errors import DimensionMismatchError, InvalidInputError
from ..models.arrays import decode_array
from ..models.frame import FrameSystem
from ..models.space import SpaceSpec
from ..services import erasure, frames, pi2
from .base_component import BaseComponent, parse_model

logger = logging.getLogger(__name__)


def parse_operator(value: Any, domain: SpaceSpec, range_: SpaceSpec) -> np.ndarray:
    """"identity" or a matrix (complex entries as [re, im])."""
    if isinstance(value, str):
        if value != "identity":
            raise InvalidInputError(f"unknown operator shorthand {value!r}")
        if domain.dim != range_.dim:
            raise DimensionMismatchError(
                f"identity needs equal dimensions, got {domain.dim} and {range_.dim}"
            )
        return np.eye(domain.dim)
    complex_field = domain.is_complex or range_.is_complex
    return decode_array(value, ndim=2, complex_field=complex_field)


class AnalysisComponent(BaseComponent):
    """
    Component for the measurements on operators and frame systems.
    """

    task_types = ("pi2", "potential", "classify", "erasure", "smoothness")

    def __init__(
        self,
        component_id: str = "analysis_001",
        name: str = "AnalysisComponent",
        version: str = "1.0.0",
    ):
        super().__init__(component_id, name, version)

    def execute(self, task_data: dict[str, Any]) -> dict[str, Any]:
        task_type = task_data.get("task_type", "unknown")
        logger.debug(f"AnalysisComponent executing task: {task_type}")

        if task_type == "pi2":
            return self.compute_pi2(task_data)
        elif task_type == "potential":
            return self.compute_potential(task_data)
        elif task_type == "classify":
            return self.classify_frame(task_data)
        elif task_type == "erasure":
            return self.compute_erasure(task_data)
        elif task_type == "smoothness":
            return self.probe_smoothness(task_data)
        else:
            raise InvalidInputError(f"Unknown analysis task type: {task_type}")

    def _frame(self, task_data: dict[str, Any]) -> FrameSystem:
        if task_data.get("frame") is None:
            raise InvalidInputError("a frame is required")
        return parse_model(FrameSystem, task_data["frame"], "frame")

    def compute_pi2(self, task_data: dict[str, Any]) -> dict[str, Any]:
        domain = parse_model(SpaceSpec, task_data.get("space"), "space")
        range_value = task_data.get("range")
        range_ = domain if range_value is None else parse_model(SpaceSpec, range_value, "range")
        operator = parse_operator(task_data.get("op", "identity"), domain, range_)
        result = pi2.pi2(
            operator, domain, range_, tol=task_data.get("tol"), seed=task_data.get("seed")
        )
        return result.model_dump()

    def compute_potential(self, task_data: dict[str, Any]) -> dict[str, Any]:
        frame = self._frame(task_data)
        return pi2.frame_potential(frame, tol=task_data.get("tol")).model_dump()

    def classify_frame(self, task_data: dict[str, Any]) -> dict[str, Any]:
        frame = self._frame(task_data)
        classification = frames.classify(frame, tol=task_data.get("tol"))
        result = classification.model_dump()
        result["naive_potential_sq"] = frames.naive_potential_sq(frame)
        result["naive_potential_sym"] = frames.naive_potential_sym(frame)
        result["trace_lower_bound"] = frames.trace_lower_bound(frame)
        return result

    def compute_erasure(self, task_data: dict[str, Any]) -> dict[str, Any]:
        frame = self._frame(task_data)
        if task_data.get("optimal"):
            return erasure.is_erasure_optimal(frame, tol=task_data.get("tol")).model_dump()
        report = erasure.erasure_error(
            frame,
            int(task_data.get("m", 1)),
            full_table=bool(task_data.get("full_table", False)),
            threads=task_data.get("threads"),
        )
        return report.model_dump()

    def probe_smoothness(self, task_data: dict[str, Any]) -> dict[str, Any]:
        space = parse_model(SpaceSpec, task_data.get("space"), "space")
        report = pi2.smoothness_probe(
            space,
            int(task_data.get("trials", 25)),
            seed=task_data.get("seed"),
            tol=task_data.get("tol"),
        )
        return report.model_dump(mode="json")
