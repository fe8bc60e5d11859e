"""Verified loading of wqed CSV tables and their JSON sidecars.

Every table must carry the '# metadata:' header naming its sidecar and the
resolved-config hash; loading refuses tables whose sidecar is missing, whose
hash disagrees, or whose sidecar was produced by a different subcommand than
the figure declares.
"""
from __future__ import annotations

import csv
import json
import re
from pathlib import Path

HEADER_RE = re.compile(r"^# metadata: (\S+) config_hash: ([0-9a-f]{64})\s*$")


class MetadataError(Exception):
    """The table's provenance does not match the figure's declaration."""


class Table:
    def __init__(self, name, columns, rows):
        self.name = name
        self.columns = columns
        self.rows = rows

    def column(self, name, numeric=True):
        idx = self.columns.index(name)
        values = [row[idx] for row in self.rows]
        if numeric:
            return [float(v) if v != "" else float("nan") for v in values]
        return values

    def where(self, **conditions):
        keep = []
        for row in self.rows:
            record = dict(zip(self.columns, row))
            if all(record[k] == str(v) for k, v in conditions.items()):
                keep.append(row)
        return Table(self.name, self.columns, keep)

    def distinct(self, name):
        idx = self.columns.index(name)
        seen = []
        for row in self.rows:
            if row[idx] not in seen:
                seen.append(row[idx])
        return seen

    def __len__(self):
        return len(self.rows)


def load_table(data_dir, table_name, expected_subcommand) -> Table:
    path = Path(data_dir) / f"{table_name}.csv"
    if not path.exists():
        raise MetadataError(f"missing table {path}")
    with open(path, "r", encoding="utf-8", newline="") as fh:
        header = fh.readline()
        match = HEADER_RE.match(header.strip() and header.rstrip("\r\n"))
        if not match:
            raise MetadataError(f"{path} lacks the '# metadata:' header")
        sidecar_name, cfg_hash = match.groups()
        reader = csv.reader(fh)
        columns = next(reader)
        rows = [tuple(row) for row in reader]

    sidecar_path = Path(data_dir) / sidecar_name
    if not sidecar_path.exists():
        raise MetadataError(f"sidecar {sidecar_path} not found for {path}")
    with open(sidecar_path, "r", encoding="utf-8") as fh:
        meta = json.load(fh)
    if meta.get("config_hash") != cfg_hash:
        raise MetadataError(
            f"{path}: config hash {cfg_hash[:12]}... does not match its "
            f"sidecar ({str(meta.get('config_hash'))[:12]}...)")
    if meta.get("subcommand") != expected_subcommand:
        raise MetadataError(
            f"{path}: produced by subcommand {meta.get('subcommand')!r}, "
            f"figure requires {expected_subcommand!r}")
    if table_name not in meta.get("tables", []):
        raise MetadataError(
            f"{path}: sidecar does not list table {table_name!r}")
    return Table(table_name, columns, rows)
