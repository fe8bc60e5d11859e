import json
import shutil

import pytest

from wqed_figures.data import MetadataError, load_table


class TestLoadTable:
    def test_roundtrip(self, dataset):
        table = load_table(dataset, "gs1q", "gs1q")
        assert table.columns[:2] == ["delta", "g"]
        assert len(table) > 0
        assert len(table.column("g")) == len(table)

    def test_where_and_distinct(self, dataset):
        table = load_table(dataset, "gs1q", "gs1q")
        deltas = table.distinct("delta")
        sub = table.where(delta=deltas[0])
        assert 0 < len(sub) < len(table)

    def test_missing_table(self, dataset):
        with pytest.raises(MetadataError, match="missing table"):
            load_table(dataset, "nonexistent", "gs1q")

    def test_wrong_subcommand_refused(self, dataset):
        with pytest.raises(MetadataError, match="requires"):
            load_table(dataset, "gs1q", "emission")

    def test_hash_mismatch_refused(self, tampered_dataset):
        with pytest.raises(MetadataError, match="hash"):
            load_table(tampered_dataset, "gs1q", "gs1q")

    def test_missing_sidecar_refused(self, dataset, tmp_path):
        shutil.copy(dataset / "gs1q.csv", tmp_path / "gs1q.csv")
        with pytest.raises(MetadataError, match="sidecar"):
            load_table(tmp_path, "gs1q", "gs1q")

    def test_header_required(self, tmp_path):
        (tmp_path / "gs1q.csv").write_text("delta,g\n0.3,0.1\n")
        with pytest.raises(MetadataError, match="header"):
            load_table(tmp_path, "gs1q", "gs1q")

    def test_table_not_listed_in_sidecar(self, dataset, tmp_path):
        shutil.copy(dataset / "gs1q.csv", tmp_path / "other.csv")
        raw = (tmp_path / "other.csv").read_text()
        (tmp_path / "other.csv").write_text(raw)
        meta = json.loads((dataset / "gs1q.meta.json").read_text())
        (tmp_path / "gs1q.meta.json").write_text(json.dumps(meta))
        with pytest.raises(MetadataError, match="list"):
            load_table(tmp_path, "other", "gs1q")
