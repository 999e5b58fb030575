"""Text checkpoint format: named parameter blocks with shape headers.

Layout:

    pubsum-checkpoint 1
    {json metadata}
    block <name> <ndim> <dim0> [<dim1> ...]
    <one row of values per line, 17 significant digits>

17 significant digits round-trips float64 exactly, so save -> load is
lossless and reloaded models predict bit-identically.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

FORMAT_TAG = "pubsum-checkpoint"
FORMAT_VERSION = 1


class CheckpointError(ValueError):
    pass


def save_checkpoint(path: str | Path, blocks: dict[str, np.ndarray], meta: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{FORMAT_TAG} {FORMAT_VERSION}\n")
        fh.write(json.dumps(meta, ensure_ascii=False, sort_keys=True) + "\n")
        for name, array in blocks.items():
            array = np.asarray(array, dtype=np.float64)
            dims = " ".join(str(d) for d in array.shape)
            fh.write(f"block {name} {array.ndim} {dims}\n")
            rows = array.reshape(-1, array.shape[-1]) if array.ndim > 1 else array.reshape(1, -1)
            for row in rows:
                fh.write(" ".join(f"{v:.17g}" for v in row) + "\n")


def load_checkpoint(path: str | Path) -> tuple[dict[str, np.ndarray], dict]:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2 or header[0] != FORMAT_TAG:
            raise CheckpointError(f"{path}: not a checkpoint file")
        if int(header[1]) != FORMAT_VERSION:
            raise CheckpointError(f"{path}: unsupported version {header[1]}")
        meta = json.loads(fh.readline())
        blocks: dict[str, np.ndarray] = {}
        line = fh.readline()
        while line:
            parts = line.split()
            if not parts:
                line = fh.readline()
                continue
            if parts[0] != "block" or len(parts) < 3:
                raise CheckpointError(f"{path}: malformed block header: {line.strip()!r}")
            name = parts[1]
            ndim = int(parts[2])
            shape = tuple(int(d) for d in parts[3 : 3 + ndim])
            n_rows = 1 if ndim <= 1 else int(np.prod(shape[:-1]))
            rows = []
            for _ in range(n_rows):
                rows.append(np.array(fh.readline().split(), dtype=np.float64))
            blocks[name] = np.concatenate(rows).reshape(shape) if shape else np.array(rows[0][0])
            line = fh.readline()
    return blocks, meta
