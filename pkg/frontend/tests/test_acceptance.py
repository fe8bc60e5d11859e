"""Secondary acceptance: after a full data-generation pass over the shipped
configs, every figure id renders with no error, and mismatched CSV metadata
is refused."""

from wqed_figures.cli import main
from wqed_figures.figures import FIGURES


def test_full_plot_suite(dataset, tmp_path, capsys):
    code = main(["all", "--data", str(dataset), "--out", str(tmp_path)])
    rendered = sorted(p.name for p in tmp_path.glob("*.svg"))
    ok = code == 0 and rendered == sorted(f"{f}.svg" for f in FIGURES)
    print(f"[{'PASS' if ok else 'FAIL'}] figure-suite: rendered "
          f"{len(rendered)}/{len(FIGURES)} ids from shipped configs")
    assert ok


def test_refusal_on_mismatch(tampered_dataset, tmp_path, capsys):
    code = main(["fig2a", "--data", str(tampered_dataset),
                 "--out", str(tmp_path)])
    ok = code == 1 and not (tmp_path / "fig2a.svg").exists()
    print(f"[{'PASS' if ok else 'FAIL'}] figure-metadata-refusal: "
          f"exit {code}, no file written")
    assert ok
