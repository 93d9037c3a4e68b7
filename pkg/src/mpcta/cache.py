"""Optional on-disk persistence for the expensive memo tables.

The cache holds the crowded-Stirling numbers, the restricted-partition
lists, and the per-(contenders, collisions) child tables; these are the
costly shared inputs (everything else rebuilds in milliseconds).  The file
format is a magic header, a version byte, then a pickle payload; files with
a foreign header or version are rejected, never half-read.
"""

from __future__ import annotations

import os
import pickle
from pathlib import Path

from . import collision, combinatorics

MAGIC = b"MPCTA1"
VERSION = 1
ENV_VAR = "MPCTA_CACHE_DIR"
FILENAME = "memo-tables.bin"


def cache_dir_from_env() -> Path | None:
    value = os.environ.get(ENV_VAR)
    return Path(value) if value else None


def save_memo_tables(directory: Path) -> Path:
    """Write the current memo tables; atomic via rename."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    payload = pickle.dumps({
        "stirling": combinatorics._STIRLING,
        "partitions": combinatorics._PARTITIONS,
        "children": collision._CHILDREN,
    }, protocol=pickle.HIGHEST_PROTOCOL)
    target = directory / FILENAME
    tmp = target.with_suffix(".tmp")
    tmp.write_bytes(MAGIC + bytes([VERSION]) + payload)
    tmp.replace(target)
    return target


def load_memo_tables(directory: Path) -> bool:
    """Merge cached tables into the in-process memos.

    Returns False when no cache file exists; raises ValueError on a file
    that does not carry the expected magic header and version.
    """
    target = Path(directory) / FILENAME
    if not target.exists():
        return False
    raw = target.read_bytes()
    if raw[: len(MAGIC)] != MAGIC:
        raise ValueError(f"{target} is not a memo-table cache (bad magic header)")
    if raw[len(MAGIC)] != VERSION:
        raise ValueError(f"{target} has cache version {raw[len(MAGIC)]}, expected {VERSION}")
    tables = pickle.loads(raw[len(MAGIC) + 1 :])
    combinatorics._STIRLING.update(tables["stirling"])
    combinatorics._PARTITIONS.update(tables["partitions"])
    collision._CHILDREN.update(tables["children"])
    return True
