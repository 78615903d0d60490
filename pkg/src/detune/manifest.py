"""Run manifests: config snapshot, seed, and artifact hashes per run."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

__all__ = ["sha256_file", "write_manifest"]


def sha256_file(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(
    out_dir: str | Path, command: str, config_snapshot: dict, artifacts: list[Path]
) -> Path:
    out_dir = Path(out_dir)
    manifest = {
        "command": command,
        "config": config_snapshot,
        "artifacts": {
            str(p.relative_to(out_dir) if p.is_relative_to(out_dir) else p): sha256_file(p)
            for p in artifacts
            if Path(p).exists()
        },
    }
    path = out_dir / "manifest.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
