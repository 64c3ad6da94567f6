"""CSV and manifest ingestion with schema validation."""

import csv
import json
from pathlib import Path


class SchemaError(ValueError):
    """A CSV file does not carry the columns a figure kind requires."""


def read_csv(path, required=()):
    """Read a CSV into a list of dicts, validating required column names.

    Numeric-looking fields are left as strings; use ``column`` to pull a
    float column.  Raises SchemaError naming the file and the missing
    columns (header is line 1 of the file).
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in required if c not in header]
        if missing:
            raise SchemaError(
                f"{path}:1: missing column(s) {', '.join(missing)} "
                f"(found: {', '.join(header) or 'empty header'})")
        return list(reader)


def column(rows, name, cast=float):
    """Extract one column as a list, applying ``cast``."""
    return [cast(r[name]) for r in rows]


def load_manifest(path):
    """Parse a run_all manifest; returns (manifest dict, base directory)."""
    path = Path(path)
    manifest = json.loads(path.read_text())
    if "artifacts" not in manifest:
        raise SchemaError(f"{path}: manifest has no 'artifacts' list")
    return manifest, path.parent
