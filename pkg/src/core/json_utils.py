"""
JSON parsing helpers for noise-model and code files.

Labels are written as [i, j] pairs (one letter) or lists of pairs (n
letters). Object keys cannot be arrays, so table keys hold the JSON text
of the label, e.g. "[[0, 1], [1, 0]]".
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, List, Tuple, Union

import numpy as np

from src.error_handler import InvalidInputError


def load_json_file(path: Union[str, Path]) -> Any:
    """Read a JSON document; decoding problems become InvalidInputError.

    A missing file raises FileNotFoundError unchanged.
    """
    p = Path(path)
    with p.open("r", encoding="utf-8") as f:
        text = f.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidInputError(f"{p.name}: invalid JSON at line {e.lineno} column {e.colno}") from e


def _parse_pair(value: Any, d: int, field: str) -> Tuple[int, int]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise InvalidInputError(f"label entry {value!r} is not an [i, j] pair", field=field)
    try:
        i, j = (int(v) for v in value)
    except (TypeError, ValueError):
        raise InvalidInputError(f"label entry {value!r} is not integral", field=field)
    if not (0 <= i < d and 0 <= j < d):
        raise InvalidInputError(f"label entry {value!r} outside Z_{d}", field=field)
    return i, j


def parse_label(raw: Any, d: int, n: int, field: str) -> List[Tuple[int, int]]:
    """n-letter label from a list of pairs or from its JSON text"""
    if isinstance(raw, str):
        try:
            raw = json.loads(raw)
        except json.JSONDecodeError:
            raise InvalidInputError(f"label key {raw!r} is not JSON", field=field)
    if not isinstance(raw, list) or len(raw) != n:
        raise InvalidInputError(f"label {raw!r} must list {n} [i, j] pairs", field=field)
    return [_parse_pair(pair, d, field) for pair in raw]


def parse_letter_table(raw: Any, d: int, field: str) -> np.ndarray:
    """Single-letter probabilities, either a flat list of d^2 floats in
    index order (i*d + j) or an object keyed by "[i, j]"
    """
    if raw is None:
        raise InvalidInputError("missing required field", field=field)
    letters = d * d
    if isinstance(raw, dict):
        out = np.zeros(letters)
        for key, value in raw.items():
            i, j = parse_label(key if key.strip().startswith("[[") else f"[{key}]", d, 1, field)[0]
            out[i * d + j] = float(value)
        return out
    if not isinstance(raw, list) or len(raw) != letters:
        raise InvalidInputError(f"expected {letters} probabilities", field=field)
    try:
        return np.array([float(v) for v in raw])
    except (TypeError, ValueError):
        raise InvalidInputError("probabilities must be numbers", field=field)


def parse_vectors(raw: Any, d: int, n: int, field: str) -> List[List[int]]:
    """Interleaved coordinate vectors of length 2n with entries in Z_d"""
    if not isinstance(raw, list):
        raise InvalidInputError("expected a list of vectors", field=field)
    out = []
    for vec in raw:
        if not isinstance(vec, list) or len(vec) != 2 * n:
            raise InvalidInputError(f"vector {vec!r} must have {2 * n} coordinates", field=field)
        try:
            coords = [int(c) for c in vec]
        except (TypeError, ValueError):
            raise InvalidInputError(f"vector {vec!r} is not integral", field=field)
        if any(not 0 <= c < d for c in coords):
            raise InvalidInputError(f"vector {vec!r} has entries outside Z_{d}", field=field)
        out.append(coords)
    return out
