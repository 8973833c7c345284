"""Regenerate tests/data/desk_reference.json from a CLI sweep of the desk config.

usage: python tools/desk_reference.py <fedhide binary> [out.json]
"""
import json
import pathlib
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent
GRID = "fedaws; fedhide(alpha=0.1|0.01, k=3); fedgn(sigma=0.1|0.3|0.5)"


def main() -> None:
    binary = sys.argv[1]
    out = pathlib.Path(sys.argv[2]) if len(sys.argv) > 2 else ROOT / "tests" / "data" / "desk_reference.json"
    config = ROOT / "tools" / "configs" / "desk.ini"
    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run([binary, "sweep", str(config), "--grid", GRID, "--out", tmp], check=True)
        runs = {}
        for summary_path in sorted(pathlib.Path(tmp).glob("*/summary.json")):
            final = json.loads(summary_path.read_text())["final"]
            runs[summary_path.parent.name] = {
                key: final[key]["mean"] for key in ("accuracy", "leakage", "eer", "proxy_similarity_avg")
            }
    payload = {"config": "tools/configs/desk.ini", "grid": GRID, "seeds": [0, 1, 2], "runs": runs}
    out.write_text(json.dumps(payload, indent=2) + "\n")


if __name__ == "__main__":
    main()
