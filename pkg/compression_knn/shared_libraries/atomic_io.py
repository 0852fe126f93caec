"""All-or-nothing file writes.

Output files are written to a temporary sibling and renamed into place, so a
reader sees either the complete file or no file at all.
"""

import json
import os
import tempfile
from pathlib import Path
from typing import Any, Union

PathLike = Union[str, Path]


def write_bytes(path: PathLike, data: bytes) -> Path:
    """Atomically write ``data`` to ``path``, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except FileNotFoundError:
            pass
        raise
    return path


def write_text(path: PathLike, text: str) -> Path:
    """Atomically write UTF-8 text with ``\\n`` line endings."""
    return write_bytes(path, text.encode("utf-8"))


def dumps_json(payload: Any) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(path: PathLike, payload: Any) -> Path:
    """Atomically write ``payload`` as canonical JSON."""
    return write_text(path, dumps_json(payload))
