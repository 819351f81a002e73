"""
Array codec for JSON artifacts.

Arrays are stored as ``{"shape": [...], "data": [flat floats]}``.
Python's float repr is the shortest string that round-trips, so a
dump → load cycle reproduces every bit.
"""

from __future__ import annotations

from typing import Any, Dict, Mapping

import numpy as np


def encode_array(arr: np.ndarray) -> Dict[str, Any]:
    arr = np.asarray(arr, dtype=np.float64)
    return {"shape": list(arr.shape), "data": [float(v) for v in arr.ravel()]}


def decode_array(payload: Mapping[str, Any]) -> np.ndarray:
    shape = tuple(int(n) for n in payload["shape"])
    data = np.asarray(payload["data"], dtype=np.float64)
    expected = int(np.prod(shape)) if shape else 1
    if data.size != expected:
        raise ValueError(f"array payload has {data.size} values for shape {shape}")
    return data.reshape(shape)


def encode_arrays(arrays: Mapping[str, np.ndarray]) -> Dict[str, Dict[str, Any]]:
    return {name: encode_array(arr) for name, arr in arrays.items()}


def decode_arrays(payload: Mapping[str, Mapping[str, Any]]) -> Dict[str, np.ndarray]:
    return {name: decode_array(p) for name, p in payload.items()}
