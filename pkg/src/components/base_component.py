"""
Base Component Class for funtf-potential
Defines the common task interface, error envelope and metrics for all components
"""

import logging
import time
from abc import ABC, abstractmethod
from datetime import datetime, timezone
from enum import Enum
from typing import Any, TypeVar

from pydantic import BaseModel, ValidationError

from ..core.errors import FuntfError, InvalidInputError

logger = logging.getLogger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)


class ComponentStatus(Enum):
    """Enumeration of possible component statuses"""

    INITIALIZED = "initialized"
    READY = "ready"
    BUSY = "busy"
    ERROR = "error"


def parse_model(model: type[ModelT], value: Any, what: str) -> ModelT:
    """Validate JSON input into a model, reporting failures as InvalidInputError."""
    if isinstance(value, model):
        return value
    try:
        return model.model_validate(value)
    except ValidationError as e:
        raise InvalidInputError(
            f"invalid {what}: {e.errors()[0]['msg']}", errors=e.error_count()
        ) from e


class BaseComponent(ABC):
    """
    Abstract base class for all components in funtf-potential.
    A component owns a set of task types and turns task dicts into results.
    """

    task_types: tuple[str, ...] = ()

    def __init__(self, component_id: str, name: str, version: str = "1.0.0"):
        self.component_id = component_id
        self.name = name
        self.version = version
        self.status = ComponentStatus.INITIALIZED
        self.created_at = datetime.now(timezone.utc)
        self.metrics: dict[str, dict[str, Any]] = {}

        self.status = ComponentStatus.READY
        logger.debug(f"Component {self.name} ({self.component_id}) initialized and ready")

    @abstractmethod
    def execute(self, task_data: dict[str, Any]) -> dict[str, Any] | list[Any]:
        """
        Execute the main function of the component.
        This must be implemented by subclasses.
        """

    def process_task(self, task: dict[str, Any]) -> dict[str, Any]:
        """
        Run one task and wrap it in an envelope. Domain errors (FuntfError)
        become {"status": "error", "error": {...}}; anything else propagates.
        """
        task_type = task.get("task_type", "unknown")
        self.status = ComponentStatus.BUSY
        start_time = time.perf_counter()
        logger.info(f"Component {self.name} starting task: {task_type}")

        try:
            result = self.execute(task)
        except FuntfError as e:
            execution_time = time.perf_counter() - start_time
            self._update_metrics(task_type, execution_time, success=False)
            self.status = ComponentStatus.READY
            logger.error(f"Component {self.name} failed task {task_type}: {e.message}")
            return {
                "component_id": self.component_id,
                "task_type": task_type,
                "status": "error",
                "error": e.to_dict(),
                "execution_time_seconds": execution_time,
            }
        except Exception:
            self.status = ComponentStatus.ERROR
            raise

        execution_time = time.perf_counter() - start_time
        self._update_metrics(task_type, execution_time, success=True)
        self.status = ComponentStatus.READY
        logger.info(f"Component {self.name} completed {task_type} in {execution_time:.3f}s")
        return {
            "component_id": self.component_id,
            "task_type": task_type,
            "status": "success",
            "result": result,
            "execution_time_seconds": execution_time,
        }

    def _update_metrics(self, task_type: str, execution_time: float, success: bool) -> None:
        metrics = self.metrics.setdefault(
            task_type,
            {
                "total_executed": 0,
                "total_successful": 0,
                "total_failed": 0,
                "total_execution_time": 0.0,
                "last_execution_time": 0.0,
            },
        )
        metrics["total_executed"] += 1
        metrics["total_successful" if success else "total_failed"] += 1
        metrics["last_execution_time"] = execution_time
        metrics["total_execution_time"] += execution_time

    def get_status(self) -> dict[str, Any]:
        return {
            "component_id": self.component_id,
            "name": self.name,
            "version": self.version,
            "status": self.status.value,
            "created_at": self.created_at.isoformat(),
            "task_types": list(self.task_types),
            "metrics": self.metrics,
        }


class ComponentRegistry:
    """
    Registry for managing all components and routing tasks by type.
    """

    def __init__(self):
        self.components: dict[str, BaseComponent] = {}
        self.routes: dict[str, str] = {}

    def register_component(self, component: BaseComponent) -> None:
        for task_type in component.task_types:
            if task_type in self.routes:
                raise ValueError(
                    f"task type {task_type} already handled by {self.routes[task_type]}"
                )
        self.components[component.component_id] = component
        for task_type in component.task_types:
            self.routes[task_type] = component.component_id
        logger.debug(f"Registered component: {component.name} ({component.component_id})")

    def component_for(self, task_type: str) -> BaseComponent:
        component_id = self.routes.get(task_type)
        if component_id is None:
            raise InvalidInputError(
                f"no component handles task type {task_type}", known=sorted(self.routes)
            )
        return self.components[component_id]

    def dispatch(self, task: dict[str, Any]) -> dict[str, Any]:
        return self.component_for(task.get("task_type", "unknown")).process_task(task)

    def get_all_statuses(self) -> dict[str, Any]:
        return {cid: component.get_status() for cid, component in self.components.items()}
