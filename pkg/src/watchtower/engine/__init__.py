"""Dependency graph, deterministic execution, incremental update propagation, views."""

from watchtower.engine.graph import DependencyGraph, build_dependency_graph, execution_order
from watchtower.engine.executor import (
    ExecutionResult,
    InstanceStatus,
    affected_instances,
    execute_catena,
    propagate_update,
)
from watchtower.engine.views import ViewModel, refresh_views, view_model_document
from watchtower.engine.runtime import CatenaRuntime

__all__ = [
    "CatenaRuntime",
    "DependencyGraph",
    "ExecutionResult",
    "InstanceStatus",
    "ViewModel",
    "affected_instances",
    "build_dependency_graph",
    "execute_catena",
    "execution_order",
    "propagate_update",
    "refresh_views",
    "view_model_document",
]
