"""
Input validation utilities for command-line values and data files.
"""

import re
from typing import List, Optional, Tuple

_ENDPOINT_PATTERN = re.compile(r"^(?P<host>[A-Za-z0-9.\-]+|\[[0-9A-Fa-f:]+\]):(?P<port>\d{1,5})$")


def validate_endpoint(endpoint: str) -> Tuple[bool, Optional[str], Optional[Tuple[str, int]]]:
    """
    Validate a host:port endpoint.

    Args:
        endpoint: String such as "127.0.0.1:9451" or "[::1]:9451"

    Returns:
        Tuple of (is_valid, error_message, (host, port))
    """
    match = _ENDPOINT_PATTERN.match(endpoint.strip())
    if not match:
        return False, f"Invalid endpoint '{endpoint}'. Use host:port (e.g., 127.0.0.1:9451)", None

    port = int(match.group("port"))
    if not 0 < port < 65536:
        return False, f"Port {port} out of range", None

    host = match.group("host").strip("[]")
    return True, None, (host, port)


def validate_seed(value: str) -> Tuple[bool, Optional[str], Optional[int]]:
    """
    Validate a non-negative integer seed.

    Returns:
        Tuple of (is_valid, error_message, seed)
    """
    try:
        seed = int(value, 0)
    except ValueError:
        return False, f"Seed must be an integer, got '{value}'", None
    if seed < 0:
        return False, "Seed must be non-negative", None
    return True, None, seed


def parse_int_matrices(text: str) -> Tuple[bool, Optional[str], Optional[List[List[List[int]]]]]:
    """
    Parse whitespace-separated integer matrices.

    Rows are lines; a blank line separates matrices. Lines starting with '#'
    are comments.

    Returns:
        Tuple of (is_valid, error_message, matrices)
    """
    matrices: List[List[List[int]]] = []
    current: List[List[int]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not raw.strip():
            if current:
                matrices.append(current)
                current = []
            continue
        if not line:
            continue
        try:
            row = [int(tok) for tok in line.replace(",", " ").split()]
        except ValueError:
            return False, f"Line {lineno}: expected integers, got '{raw.strip()}'", None
        if current and len(row) != len(current[0]):
            return False, f"Line {lineno}: ragged row ({len(row)} vs {len(current[0])} values)", None
        current.append(row)

    if current:
        matrices.append(current)
    if not matrices:
        return False, "No matrices found", None
    return True, None, matrices
