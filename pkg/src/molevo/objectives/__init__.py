"""Optimization criteria: QED, normalized SA score and multi-property tasks."""
from .modifiers import ModifierError, ScoreModifier
from .qed import qed
from .sascore import FragmentTable, build_fragment_table, normalize_sa, sa_normalized, sa_score
from .tasks import (Component, ObjectiveVector, TaskSpec, TaskSpecError, UnknownTaskError,
                    bundled_tasks, evaluate, load_task, task_from_dict)

__all__ = [
    "Component", "FragmentTable", "ModifierError", "ObjectiveVector", "ScoreModifier",
    "TaskSpec", "TaskSpecError", "UnknownTaskError", "build_fragment_table", "bundled_tasks",
    "evaluate", "load_task", "normalize_sa", "qed", "sa_normalized", "sa_score", "task_from_dict",
]
