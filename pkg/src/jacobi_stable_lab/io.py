"""File output helpers."""
from __future__ import annotations

import os
import tempfile
from pathlib import Path


def atomic_write_text(destination: Path, text: str) -> None:
    """Write ``text`` to ``destination`` through a temp file and rename."""
    destination = Path(destination)
    destination.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=destination.parent, prefix=f".{destination.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, destination)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
