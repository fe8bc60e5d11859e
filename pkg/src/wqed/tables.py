"""Column-oriented result tables with deterministic CSV output and a JSON
metadata sidecar.

Every CSV starts with a '#' comment line naming the sidecar and the resolved
config hash; the sidecar echoes the full config so any output file can be
reproduced from itself. No wall-clock data is written anywhere.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path


@dataclass
class ResultTable:
    name: str
    columns: list
    rows: list = field(default_factory=list)

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError(f"row width {len(values)} != {len(self.columns)}")
        self.rows.append(tuple(values))


def _format_value(value, float_format):
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return format(value, float_format)
    return str(value)


def write_outputs(out_dir, subcommand, tables, resolved_config, cfg_hash,
                  extra_metadata=None, code_version="0.1.0"):
    """Write every table as <name>.csv plus one <subcommand>.meta.json sidecar.
    Returns the sidecar path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    sidecar_name = f"{subcommand}.meta.json"
    float_format = resolved_config["output"]["float_format"]
    for table in tables:
        path = out / f"{table.name}.csv"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(f"# metadata: {sidecar_name} config_hash: {cfg_hash}\r\n")
            writer = csv.writer(fh)
            writer.writerow(table.columns)
            for row in table.rows:
                writer.writerow([_format_value(v, float_format) for v in row])
    meta = {
        "subcommand": subcommand,
        "config": resolved_config,
        "config_hash": cfg_hash,
        "code_version": code_version,
        "tables": [t.name for t in tables],
        "row_counts": {t.name: len(t.rows) for t in tables},
    }
    if extra_metadata:
        meta["details"] = extra_metadata
    sidecar = out / sidecar_name
    with open(sidecar, "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return sidecar
