#!/usr/bin/env python3
"""
Exception hierarchy shared by the simulator modules.

Every error carries the tag of the module that raised it so the CLI can report
where a run failed and pick the right exit code.
"""

from typing import Optional, Tuple


class SimulationError(Exception):
    """Base class for all simulator failures"""

    def __init__(self, message: str, module: Optional[str] = None):
        super().__init__(message)
        self.module = module

    def __str__(self) -> str:
        base = super().__str__()
        return f"[{self.module}] {base}" if self.module else base


class ConfigError(SimulationError):
    """Invalid or unknown configuration values"""


class DomainError(SimulationError):
    """Input outside the physical domain of an operation"""


class ConfinementError(DomainError):
    """SPP mode does not decay away from the graphene sheet"""


class NumericError(SimulationError):
    """Overflow, NaN or a failed numerical procedure"""

    def __init__(self, message: str, module: Optional[str] = None, step: Optional[int] = None):
        super().__init__(message, module)
        self.step = step


class ConvergenceError(NumericError):
    """Refinement did not reach the requested tolerance"""


class SingularityError(NumericError):
    """Denominator vanishes (resonant conductivity)"""


class BranchError(NumericError):
    """Neither square-root branch satisfies the branch rule"""

    def __init__(self, message: str, roots: Tuple[complex, complex], module: Optional[str] = None):
        super().__init__(message, module)
        self.roots = roots
