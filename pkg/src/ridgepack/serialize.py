"""File output helpers: canonical JSON, CSV tables, and run manifests.

Outputs are byte-reproducible: JSON is dumped with sorted keys and
shortest round-trip-exact float representations, and manifests carry no
wall-clock data unless SOURCE_DATE_EPOCH is set in the environment.
Every JSON artifact embeds the digest of the manifest that produced it;
CSV artifacts get a sidecar manifest referencing them instead.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
from pathlib import Path
from typing import Any, Iterable, Sequence

from . import __version__


def _jsonable(obj: Any) -> Any:
    """Normalize to plain JSON types; non-finite floats become null/strings."""
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        if math.isnan(obj):
            return None
        if math.isinf(obj):
            return None
        return obj
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        # numpy scalars
        try:
            return _jsonable(obj.item())
        except (AttributeError, ValueError):
            pass
    return obj


def dumps_json(obj: Any) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def sha256_of(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def sha256_file(path: str | Path) -> str:
    return sha256_of(Path(path).read_bytes())


def build_manifest(
    command: str,
    parameters: dict,
    seed: int | None,
    input_paths: Sequence[str | Path] = (),
) -> dict:
    """Deterministic run manifest; its digest is embedded in outputs."""
    inputs = {str(p): sha256_file(p) for p in input_paths}
    core = {
        "command": command,
        "parameters": _jsonable(parameters),
        "seed": seed,
        "version": __version__,
        "inputs": inputs,
    }
    digest = sha256_of(json.dumps(core, sort_keys=True).encode())
    manifest = dict(core)
    manifest["manifest_digest"] = digest
    # Wall-clock time breaks bit-reproducibility, so it is only recorded
    # when the caller pins it through the environment.
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    manifest["timestamp"] = int(epoch) if epoch else None
    return manifest


def write_json_artifact(
    path: str | Path, payload: dict, manifest: dict
) -> None:
    doc = dict(payload)
    doc["manifest_digest"] = manifest["manifest_digest"]
    Path(path).write_text(dumps_json(doc))
    _write_manifest(path, manifest)


def write_csv_artifact(
    path: str | Path,
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    manifest: dict,
) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(header))
        for row in rows:
            writer.writerow([_csv_cell(v) for v in row])
    _write_manifest(path, manifest)


def _csv_cell(v: Any) -> Any:
    if isinstance(v, float):
        return repr(v)
    return v


def _write_manifest(artifact_path: str | Path, manifest: dict) -> None:
    artifact_path = Path(artifact_path)
    doc = dict(manifest)
    doc["outputs"] = {artifact_path.name: sha256_file(artifact_path)}
    manifest_path = artifact_path.with_name(artifact_path.name + ".manifest.json")
    manifest_path.write_text(dumps_json(doc))
