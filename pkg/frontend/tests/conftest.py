import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parents[2]
CONFIG_DIR = REPO_ROOT / "configs"

SUBCOMMANDS = {
    "gs1q": "gs1q.yaml",
    "bound1q": "bound1q.yaml",
    "gsphotons": "gsphotons.yaml",
    "benchmark-ed": "benchmark_ed.yaml",
    "emission": "emission.yaml",
    "gs2q": "gs2q.yaml",
    "bound2q": "bound2q.yaml",
    "transfer": "transfer.yaml",
}


def run_wqed(subcommand, out_dir, overrides=()):
    cmd = [sys.executable, "-m", "wqed.cli", subcommand,
           "--config", str(CONFIG_DIR / SUBCOMMANDS[subcommand]),
           "--out", str(out_dir)]
    for item in overrides:
        cmd += ["--set", item]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    assert proc.returncode == 0, f"{subcommand} failed: {proc.stderr}"


@pytest.fixture(scope="session")
def dataset(tmp_path_factory):
    """Full data-generation pass over every shipped config, via the wqed CLI
    (the only interface this package consumes)."""
    out = tmp_path_factory.mktemp("dataset")
    for sub in SUBCOMMANDS:
        run_wqed(sub, out)
    return out


@pytest.fixture()
def tampered_dataset(dataset, tmp_path):
    """Copy of one table with its recorded config hash corrupted."""
    for name in ("gs1q.csv", "gs1q.meta.json"):
        shutil.copy(dataset / name, tmp_path / name)
    meta = json.loads((tmp_path / "gs1q.meta.json").read_text())
    meta["config_hash"] = "0" * 64
    (tmp_path / "gs1q.meta.json").write_text(json.dumps(meta))
    return tmp_path
