"""
Shared utilities for locating and loading bundled data files from qcoexist/data/.
"""

from __future__ import annotations
import json
import os

_DATA_DIR = os.path.join(os.path.dirname(os.path.dirname(__file__)), "data")


def data_file_path(filename: str) -> str:
    """Absolute path of a bundled data asset."""
    return os.path.join(_DATA_DIR, filename)


def load_data_file(filename: str) -> dict:
    """Load a JSON data file from qcoexist/data/.

    Returns an empty dict if the file is not found.
    """
    filepath = data_file_path(filename)
    try:
        with open(filepath, "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        return {}
