"""Measurement plans: goals, the questions refining them, the metrics answering them.

Document format (JSON, normative in docs/gqm.md): sections goals[],
questions[], metrics[].
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from watchtower.errors import DocumentError


@dataclass(frozen=True)
class Goal:
    id: str
    object: str
    purpose: str
    quality_focus: str
    viewpoint: str  # the role this goal serves
    context: str = ""


@dataclass(frozen=True)
class Question:
    id: str
    goal: str
    text: str


@dataclass(frozen=True)
class Metric:
    id: str
    question: str
    name: str
    data_type: str
    technique_tags: tuple[str, ...] = ()
    view_kind: str | None = None


@dataclass(frozen=True)
class GqmPlan:
    goals: tuple[Goal, ...] = ()
    questions: tuple[Question, ...] = ()
    metrics: tuple[Metric, ...] = ()

    def goal(self, goal_id: str) -> Goal | None:
        return next((g for g in self.goals if g.id == goal_id), None)

    def question(self, question_id: str) -> Question | None:
        return next((q for q in self.questions if q.id == question_id), None)

    def goal_of_metric(self, metric: Metric) -> Goal | None:
        question = self.question(metric.question)
        return self.goal(question.goal) if question else None


def _require(obj: dict, key: str, path: str) -> str:
    if key not in obj or not isinstance(obj[key], str):
        raise DocumentError(f"{path}.{key}", "missing or non-text field")
    return obj[key]


def parse_gqm_plan(document: dict | str) -> GqmPlan:
    """Parse and referentially check a plan document."""
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from exc
    if not isinstance(document, dict):
        raise DocumentError("document", "expected an object")

    goals = []
    for i, raw in enumerate(document.get("goals", [])):
        path = f"goals[{i}]"
        if not isinstance(raw, dict):
            raise DocumentError(path, "expected an object")
        goals.append(
            Goal(
                id=_require(raw, "id", path),
                object=_require(raw, "object", path),
                purpose=_require(raw, "purpose", path),
                quality_focus=_require(raw, "quality_focus", path),
                viewpoint=_require(raw, "viewpoint", path),
                context=raw.get("context", ""),
            )
        )
    questions = []
    for i, raw in enumerate(document.get("questions", [])):
        path = f"questions[{i}]"
        if not isinstance(raw, dict):
            raise DocumentError(path, "expected an object")
        questions.append(
            Question(id=_require(raw, "id", path), goal=_require(raw, "goal", path), text=_require(raw, "text", path))
        )
    metrics = []
    for i, raw in enumerate(document.get("metrics", [])):
        path = f"metrics[{i}]"
        if not isinstance(raw, dict):
            raise DocumentError(path, "expected an object")
        tags = raw.get("technique_tags", [])
        if not isinstance(tags, list) or not all(isinstance(t, str) for t in tags):
            raise DocumentError(f"{path}.technique_tags", "expected a list of text tags")
        view_kind = raw.get("view_kind")
        if view_kind is not None and not isinstance(view_kind, str):
            raise DocumentError(f"{path}.view_kind", "expected text or null")
        metrics.append(
            Metric(
                id=_require(raw, "id", path),
                question=_require(raw, "question", path),
                name=_require(raw, "name", path),
                data_type=_require(raw, "data_type", path),
                technique_tags=tuple(tags),
                view_kind=view_kind,
            )
        )

    for section, items in (("goals", goals), ("questions", questions), ("metrics", metrics)):
        seen: set[str] = set()
        for i, item in enumerate(items):
            if item.id in seen:
                raise DocumentError(f"{section}[{i}].id", f"duplicate id {item.id!r}")
            seen.add(item.id)
    goal_ids = {g.id for g in goals}
    question_ids = {q.id for q in questions}
    for i, question in enumerate(questions):
        if question.goal not in goal_ids:
            raise DocumentError(f"questions[{i}].goal", f"unknown goal {question.goal!r}")
    for i, metric in enumerate(metrics):
        if metric.question not in question_ids:
            raise DocumentError(f"metrics[{i}].question", f"unknown question {metric.question!r}")

    return GqmPlan(goals=tuple(goals), questions=tuple(questions), metrics=tuple(metrics))


def serialize_gqm_plan(plan: GqmPlan) -> dict:
    return {
        "goals": [
            {
                "id": g.id,
                "object": g.object,
                "purpose": g.purpose,
                "quality_focus": g.quality_focus,
                "viewpoint": g.viewpoint,
                "context": g.context,
            }
            for g in plan.goals
        ],
        "questions": [{"id": q.id, "goal": q.goal, "text": q.text} for q in plan.questions],
        "metrics": [
            {
                "id": m.id,
                "question": m.question,
                "name": m.name,
                "data_type": m.data_type,
                "technique_tags": list(m.technique_tags),
                "view_kind": m.view_kind,
            }
            for m in plan.metrics
        ],
    }
