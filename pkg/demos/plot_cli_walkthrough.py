"""
Command-line walkthrough
========================

Drive the ``qrough`` command from Python: synthesize a growing fire, score
it, and evaluate the masks against ground truth. The same calls work from a
shell as ``qrough synth ...`` and so on.
"""

import json
import tempfile
from pathlib import Path

from qrough.cli import main
from qrough.frame_io import read_report

work = Path(tempfile.mkdtemp(prefix="qrough_demo_"))

# 60 frames of a fire growing 1% per frame, plus ground-truth masks
main(["synth", "--scenario", "grow", "--frames", "60", "--out", str(work / "seq")])

# masks, a JSON-lines report and a Q-table in one pass
main([
    "threat", "--input", str(work / "seq" / "frames"), "--fps", "30",
    "--out", str(work / "masks"), "--report", str(work / "report.jsonl"),
    "--plot", str(work / "threat.csv"), "--save-qtable", str(work / "qtable.json"),
])

header, reports = read_report(work / "report.jsonl")
print("run parameters:", header)
for r in reports[::10]:
    print(f"frame {r.frame_index:2d}  area {r.fire_area:5d}  T_F {r.threat:+.3f}  alarm {r.alarm}")

main(["eval", "--pred", str(work / "masks"), "--gt", str(work / "seq" / "gt"),
      "--report", str(work / "eval.json")])
print(json.dumps(json.loads((work / "eval.json").read_text()), indent=2))
print("outputs in", work)
