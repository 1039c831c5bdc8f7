"""Declaration language for algebras, morphisms and tasks, plus the CLI."""

from .diagnostics import Diagnostic, FrontendError, Span
from .elaborate import Program, Task, elaborate, load
from .parser import parse
from .printer import print_file

__all__ = ["Diagnostic", "FrontendError", "Program", "Span", "Task", "elaborate", "load", "parse", "print_file"]
