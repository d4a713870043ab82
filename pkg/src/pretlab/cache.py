"""Optional on-disk cache for heavy tables (prime sieves, Fourier tables).

Enabled only when the environment variable PRETLAB_CACHE_DIR points at a
writable directory.  Entries are versioned .npz files; bumping CACHE_VERSION
invalidates everything previously written.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

CACHE_VERSION = 1


def _cache_dir() -> Path | None:
    root = os.environ.get("PRETLAB_CACHE_DIR")
    if not root:
        return None
    path = Path(root)
    path.mkdir(parents=True, exist_ok=True)
    return path


def load_array(key: str) -> np.ndarray | None:
    root = _cache_dir()
    if root is None:
        return None
    path = root / f"{key}_v{CACHE_VERSION}.npz"
    if not path.exists():
        return None
    try:
        with np.load(path) as data:
            return data["arr"]
    except Exception:
        return None


def store_array(key: str, arr: np.ndarray) -> None:
    root = _cache_dir()
    if root is None:
        return
    path = root / f"{key}_v{CACHE_VERSION}.npz"
    try:
        np.savez_compressed(path, arr=arr)
    except OSError:
        pass
