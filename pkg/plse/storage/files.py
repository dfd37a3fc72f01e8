"""
File Storage
CSV and JSON interchange: comma separated, UTF-8, LF line endings, round-trip float precision
"""

import json
from pathlib import Path
import sys
from typing import Any, Dict, Union

import numpy as np
import pandas as pd

from plse.exceptions import InputDataError

PathLike = Union[str, Path]

# "-" writes to stdout
STDOUT = "-"


def read_matrix_csv(path: PathLike, field: str, header: bool = False) -> np.ndarray:
    """Numeric CSV as a 2-D float array; errors name the CLI field"""
    try:
        frame = pd.read_csv(path, header=0 if header else None, dtype=float, encoding="utf-8")
    except FileNotFoundError:
        raise InputDataError(f"{field}: file not found: {path}", field=field)
    except pd.errors.EmptyDataError:
        raise InputDataError(f"{field}: file is empty: {path}", field=field)
    except (pd.errors.ParserError, ValueError, UnicodeDecodeError) as exc:
        raise InputDataError(f"{field}: not a numeric CSV ({exc})", field=field)
    values = frame.to_numpy(dtype=float)
    if values.size == 0:
        raise InputDataError(f"{field}: no numeric rows in {path}", field=field)
    if not np.all(np.isfinite(values)):
        raise InputDataError(f"{field}: missing or non-finite entries", field=field)
    return values


def read_vector_csv(path: PathLike, field: str, header: bool = False) -> np.ndarray:
    """Single-column CSV as a vector"""
    values = read_matrix_csv(path, field, header)
    if values.shape[1] != 1:
        raise InputDataError(f"{field}: expected one column, found {values.shape[1]}", field=field)
    return values[:, 0]


def write_frame(frame: pd.DataFrame, path: PathLike, header: bool = True) -> None:
    """CSV with the shortest round-trip float representation"""
    target = sys.stdout if str(path) == STDOUT else path
    frame.to_csv(target, index=False, header=header, lineterminator="\n", encoding="utf-8")


def write_vector_csv(values: np.ndarray, path: PathLike) -> None:
    """One value per line, no header, same dialect as the inputs"""
    write_frame(pd.DataFrame({"value": np.asarray(values, dtype=float)}), path, header=False)


def read_json(path: PathLike, field: str) -> Dict[str, Any]:
    try:
        with open(path, encoding="utf-8") as handle:
            payload = json.load(handle)
    except FileNotFoundError:
        raise InputDataError(f"{field}: file not found: {path}", field=field)
    except json.JSONDecodeError as exc:
        raise InputDataError(f"{field}: invalid JSON at line {exc.lineno} ({exc.msg})", field=field)
    if not isinstance(payload, (dict, list)):
        raise InputDataError(f"{field}: expected a JSON object", field=field)
    return payload


def dumps(payload: Any) -> str:
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def write_json(payload: Any, path: PathLike) -> None:
    text = dumps(payload)
    if str(path) == STDOUT:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
