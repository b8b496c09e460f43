"""Agent kinds, meta prompts, output schemas and runners."""

from .errors import (
    AgentError,
    SchemaViolationError,
    StanceMultisetViolationError,
    UnknownModuleNameError,
    WrongModuleKindError,
)
from .kinds import (
    ANALYZER,
    QUESTIONER,
    REFLECTOR,
    SIMULATOR,
    STANCE_ROSTER,
    ActivationState,
    AgentKind,
    AgentSpec,
    Comment,
    CommentIssue,
    ReflectionDirectives,
    Stance,
    TaskBrief,
    commentator,
    designer,
    user_comment,
)
from .roster import (
    analyzer_spec,
    commentator_specs,
    designer_spec,
    load_meta_prompt,
    questioner_spec,
    reflector_spec,
    simulator_spec,
    substitute,
)
from .runners import (
    brief_text,
    run_analyzer,
    run_commentators,
    run_designer,
    run_reflector,
    run_simulator_dialogue,
)
from .schemas import (
    allowed_directive_targets,
    block_from_json,
    block_to_json,
    extract_json,
    mentioned_modules,
)

__all__ = [
    "ANALYZER",
    "ActivationState",
    "AgentError",
    "AgentKind",
    "AgentSpec",
    "Comment",
    "CommentIssue",
    "QUESTIONER",
    "REFLECTOR",
    "ReflectionDirectives",
    "SIMULATOR",
    "STANCE_ROSTER",
    "SchemaViolationError",
    "Stance",
    "StanceMultisetViolationError",
    "TaskBrief",
    "UnknownModuleNameError",
    "WrongModuleKindError",
    "allowed_directive_targets",
    "analyzer_spec",
    "block_from_json",
    "block_to_json",
    "brief_text",
    "commentator",
    "commentator_specs",
    "designer",
    "designer_spec",
    "extract_json",
    "load_meta_prompt",
    "mentioned_modules",
    "questioner_spec",
    "reflector_spec",
    "run_analyzer",
    "run_commentators",
    "run_designer",
    "run_reflector",
    "run_simulator_dialogue",
    "simulator_spec",
    "substitute",
    "user_comment",
]
