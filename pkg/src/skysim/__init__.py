"""skysim: static drone-code simulation and corrective LLM code generation.

A deterministic interpreter for a small drone-control DSL doubles as the
ground-truth oracle and as the non-LLM simulation baselines; around it sit
the prompt framework, the LLM role contracts, the corrective loop, and a
benchmark harness with repetition averaging and report/figure emission.
"""

from . import bench, interpreter, llm_client, llm_roles, pipeline, prompts
from .llm_roles import Observation, ObservationSource, Verdict
from .pipeline import LoopResult, MethodConfig, RoleBundles, Tolerances, observe, run_task

__version__ = "0.1.0"

__all__ = [
    "LoopResult",
    "MethodConfig",
    "Observation",
    "ObservationSource",
    "RoleBundles",
    "Tolerances",
    "Verdict",
    "bench",
    "interpreter",
    "llm_client",
    "llm_roles",
    "observe",
    "pipeline",
    "prompts",
    "run_task",
    "__version__",
]
