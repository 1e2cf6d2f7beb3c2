"""The published JSON schema for run reports, loaded from the packaged
report_schema.json."""

from __future__ import annotations

import json
from importlib import resources

with resources.files(__package__).joinpath("report_schema.json").open("r") as _fh:
    REPORT_SCHEMA: dict = json.load(_fh)
