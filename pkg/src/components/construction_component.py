"""
Construction Component for funtf-potential
Handles the FUNTF constructions and the numerical search
"""

import logging
from typing import Any

from ..core.errors import InvalidInputError
from ..models.frame import FrameSystem
from ..models.space import SpaceSpec
from ..services import construct, frames
from .base_component import BaseComponent, parse_model

logger = logging.getLogger(__name__)

FAMILIES = (
    "dft",
    "length",
    "multiples",
    "auerbach",
    "ell1-n+1",
    "ell1-special",
    "ell1-length",
)


class ConstructionComponent(BaseComponent):
    """
    Component that builds frame systems, either by closed-form families or by search.
    """

    task_types = ("construct", "search")

    def __init__(
        self,
        component_id: str = "construction_001",
        name: str = "ConstructionComponent",
        version: str = "1.0.0",
    ):
        super().__init__(component_id, name, version)

    def execute(self, task_data: dict[str, Any]) -> dict[str, Any]:
        task_type = task_data.get("task_type", "unknown")
        if task_type == "construct":
            return self.build_family(task_data)
        elif task_type == "search":
            return self.search(task_data)
        else:
            raise InvalidInputError(f"Unknown construction task type: {task_type}")

    @staticmethod
    def _required(task_data: dict[str, Any], key: str) -> Any:
        value = task_data.get(key)
        if value is None:
            raise InvalidInputError(f"--{key} is required for family {task_data.get('family')}")
        return value

    def _space(self, task_data: dict[str, Any]) -> SpaceSpec:
        return parse_model(SpaceSpec, self._required(task_data, "space"), "space")

    def build_family(self, task_data: dict[str, Any]) -> dict[str, Any]:
        family = task_data.get("family")
        frame = self._build(family, task_data)
        classification = frames.classify(frame)
        logger.info(
            f"Built {family} frame of length {frame.length} on {frame.space.label()}: "
            f"{classification.kind}"
        )
        return {"frame": frame.model_dump(), "classification": classification.model_dump()}

    def _build(self, family: str | None, task_data: dict[str, Any]) -> FrameSystem:
        lambdas = task_data.get("lambdas")
        if family == "dft":
            return construct.dft_funtf(self._space(task_data), lambdas)
        if family == "length":
            return construct.funtf_of_length(
                self._space(task_data), int(self._required(task_data, "len")), lambdas
            )
        if family == "multiples":
            return construct.funtf_by_multiples(
                self._space(task_data), int(self._required(task_data, "len"))
            )
        if family == "auerbach":
            return frames.auerbach_basis(self._space(task_data), seed=task_data.get("seed"))
        if family == "ell1-n+1":
            return construct.ell1_funtf_n_plus_1(int(self._required(task_data, "dim")))
        if family == "ell1-special":
            return construct.ell1_special(
                int(self._required(task_data, "dim")), int(self._required(task_data, "len"))
            )
        if family == "ell1-length":
            return construct.ell1_funtf_of_length(
                int(self._required(task_data, "dim")), int(self._required(task_data, "len"))
            )
        raise InvalidInputError(f"unknown family {family!r}", families=list(FAMILIES))

    def search(self, task_data: dict[str, Any]) -> dict[str, Any]:
        report = construct.search_funtf(
            self._space(task_data),
            int(self._required(task_data, "len")),
            seed=task_data.get("seed"),
            max_iters=task_data.get("max_iters"),
            restarts=task_data.get("restarts"),
            avoid=task_data.get("avoid"),
            threads=task_data.get("threads"),
        )
        return report.model_dump()
