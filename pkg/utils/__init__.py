"""
Utils package initialization: logging, validators and the exception hierarchy.
"""

from .logging_config import setup_logging
from .validators import parse_int_matrices, validate_endpoint, validate_seed

__all__ = ["setup_logging", "parse_int_matrices", "validate_endpoint", "validate_seed"]
