"""Columnar binary serialization of a draw store.

Layout: 8-byte magic, little-endian uint32 header length, UTF-8 JSON header
(column names/shapes, data, config echo, seed), then the raw float64 column
blocks in header order, C-contiguous little-endian.
"""
from __future__ import annotations

import json
import struct
from dataclasses import asdict
from pathlib import Path

import numpy as np

from ..families import PriorFamily
from .chain import DrawStore
from .state import ChainConfig, FixedGlobals, GlobalPriors

MAGIC = b"HTHSDRW1"


def _config_record(config: ChainConfig) -> dict:
    rec = asdict(config)
    rec["fixed_globals"] = asdict(config.fixed_globals)
    return rec


def save_store(path, store: DrawStore) -> None:
    header = {
        "family": store.family.value,
        "n": store.n,
        "retained": store.retained,
        "seed": store.config.seed,
        "config": _config_record(store.config),
        "priors": asdict(store.priors),
        "y": [float(v) for v in store.y],
        "columns": [
            {"name": name, "shape": list(arr.shape)} for name, arr in store.columns.items()
        ],
    }
    raw = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(raw)))
        fh.write(raw)
        for arr in store.columns.values():
            fh.write(np.ascontiguousarray(arr, dtype="<f8").tobytes())


def load_store(path) -> DrawStore:
    data = Path(path).read_bytes()
    if data[:8] != MAGIC:
        raise ValueError(f"{path} is not a draw-store file (bad magic)")
    (hlen,) = struct.unpack("<I", data[8:12])
    header = json.loads(data[12 : 12 + hlen].decode("utf-8"))
    offset = 12 + hlen
    columns: dict[str, np.ndarray] = {}
    for col in header["columns"]:
        shape = tuple(col["shape"])
        count = int(np.prod(shape))
        arr = np.frombuffer(data, dtype="<f8", count=count, offset=offset).reshape(shape)
        columns[col["name"]] = arr.copy()
        offset += count * 8
    cfg = dict(header["config"])
    cfg["fixed_globals"] = FixedGlobals(**cfg["fixed_globals"])
    config = ChainConfig(**cfg)
    return DrawStore(
        family=PriorFamily(header["family"]),
        y=np.array(header["y"]),
        config=config,
        priors=GlobalPriors(**header["priors"]),
        columns=columns,
    )
