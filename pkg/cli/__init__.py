"""Command-line package initialization."""

from .commands import cmd_bench, cmd_demo, cmd_oracle, cmd_params
from .config import OutputFormat, RoleChoice, RunConfig, TransportKind

__all__ = [
    "cmd_bench",
    "cmd_demo",
    "cmd_oracle",
    "cmd_params",
    "OutputFormat",
    "RoleChoice",
    "RunConfig",
    "TransportKind",
]
