#!/usr/bin/env python3
"""
OpenAPI schema generation and drift check.

Writes the Coupon Timer API schema to ``openapi.json`` at the project root, or
with ``--check`` compares the committed file against the running app.

Usage:
    uv run poe generate-openapi
    uv run poe verify-openapi

Exit codes:
    0: Schema written, or up-to-date
    1: Schema out-of-date or invalid
"""

import argparse
import json
import sys
from collections.abc import Hashable, Mapping
from pathlib import Path
from typing import Any, cast

from openapi_spec_validator import validate
from openapi_spec_validator.validation.exceptions import OpenAPIValidationError

# Add the project root to the path so we can import the FastAPI app
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from main import app  # noqa: E402

SCHEMA_PATH = project_root / "openapi.json"


def _dump(schema: dict[str, Any]) -> str:
    return json.dumps(schema, indent=2, ensure_ascii=False, sort_keys=True) + "\n"


def _summary(schema: dict[str, Any]) -> str:
    paths = len(schema.get("paths", {}))
    models = len(schema.get("components", {}).get("schemas", {}))
    version = schema.get("info", {}).get("version", "unknown")
    return f"{paths} endpoints, {models} schemas, version {version}"


def generate() -> bool:
    schema = app.openapi()
    try:
        validate(cast(Mapping[Hashable, Any], schema))
    except OpenAPIValidationError as exc:
        print(f"❌ Generated schema is invalid: {exc}")
        return False
    SCHEMA_PATH.write_text(_dump(schema), encoding="utf-8")
    print(f"✅ Wrote {SCHEMA_PATH} ({_summary(schema)})")
    return True


def check() -> bool:
    """Compare openapi.json with the schema the app would generate."""
    if not SCHEMA_PATH.exists():
        print("❌ openapi.json does not exist; run 'uv run poe generate-openapi'")
        return False

    current = app.openapi()
    existing = json.loads(SCHEMA_PATH.read_text(encoding="utf-8"))
    if _dump(current) == _dump(existing):
        print(f"✅ OpenAPI schema is up-to-date ({_summary(current)})")
        return True

    print("❌ OpenAPI schema is out-of-date!")
    added = set(current.get("paths", {})) - set(existing.get("paths", {}))
    removed = set(existing.get("paths", {})) - set(current.get("paths", {}))
    if added:
        print(f"📢 New endpoints: {', '.join(sorted(added))}")
    if removed:
        print(f"🗑️  Removed endpoints: {', '.join(sorted(removed))}")
    print("Run 'uv run poe generate-openapi' to update it.")
    return False


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Generate or check openapi.json.")
    parser.add_argument(
        "--check",
        action="store_true",
        help="Fail when openapi.json differs from the generated schema.",
    )
    args = parser.parse_args()

    success = check() if args.check else generate()
    sys.exit(0 if success else 1)
