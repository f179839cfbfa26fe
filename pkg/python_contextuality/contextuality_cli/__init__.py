from .config import RunConfig
from .documents import SchemaError
from .main import EXIT_CONVERGENCE, EXIT_OK, EXIT_VALIDATION, build_parser, main, run

__all__ = [
    "RunConfig",
    "SchemaError",
    "EXIT_CONVERGENCE",
    "EXIT_OK",
    "EXIT_VALIDATION",
    "build_parser",
    "main",
    "run",
]
