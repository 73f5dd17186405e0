"""Smoke test for the flowspec_py extension.

Build first with `cargo build -p flowspec-py`, then run
`python3 python/smoke_test.py [path/to/libflowspec_py.so]`.
"""

import json
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "crates" / "core" / "fixtures"


def load_extension(built):
    # the shared library must be named after the module to be importable
    tmp = Path(tempfile.mkdtemp())
    shutil.copy(built, tmp / "flowspec_py.so")
    sys.path.insert(0, str(tmp))
    import flowspec_py

    return flowspec_py


def main():
    built = Path(sys.argv[1]) if len(sys.argv) > 1 else ROOT / "target" / "debug" / "libflowspec_py.so"
    fs = load_extension(built)

    m1 = fs.Model.from_dsl((FIXTURES / "m1.pml").read_text())
    assert m1.title == "M1", m1.title
    assert m1.transitions == ["setup", "t1"]
    text = m1.emit()
    assert "GIVEN S1\n  WHEN ev1\n  THEN a1\n" in text, text

    m9 = fs.Model.from_xml((FIXTURES / "m9.xml").read_text())
    report = json.loads(m9.check((FIXTURES / "m9_rows.feature").read_text()))
    assert report["passed"] and report["coverage"] == 1.0, report

    strict = m9.emit(mode="strict", style="gherkin")
    back, diags = fs.infer(strict)
    assert not any(d.startswith("error") for d in diags), diags
    assert back.isomorphic(m9)
    assert back.to_dot().startswith("digraph")

    m4 = fs.Model.from_dsl((FIXTURES / "m4.pml").read_text())
    assert any("OverlappingGuards" in d for d in m4.diagnostics())
    assert dict(m4.patterns())["t1"] == "ExclusiveChoice"

    sk = json.loads(fs.skeletons((FIXTURES / "sample.feature").read_text()))
    assert sk == json.loads((FIXTURES / "sample.skeletons.json").read_text())

    try:
        fs.Model.from_dsl("process {")
    except ValueError:
        pass
    else:
        raise AssertionError("malformed model accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
