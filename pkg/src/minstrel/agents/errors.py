"""Errors raised while running agents and validating their output."""

from __future__ import annotations


class AgentError(Exception):
    code = "AgentError"


class SchemaViolationError(AgentError):
    """Agent output failed validation, including after the repair turn."""

    code = "SchemaViolation"

    def __init__(self, message: str, raw: str = ""):
        super().__init__(message)
        self.raw = raw


class UnknownModuleNameError(AgentError):
    code = "UnknownModuleName"

    def __init__(self, name: str):
        super().__init__(f"unknown module name: {name!r}")
        self.name = name


class WrongModuleKindError(AgentError):
    code = "WrongModuleKind"

    def __init__(self, expected: str, actual: str):
        super().__init__(f"designer for {expected} produced a {actual} block")
        self.expected = expected
        self.actual = actual


class StanceMultisetViolationError(AgentError):
    code = "StanceMultisetViolation"
