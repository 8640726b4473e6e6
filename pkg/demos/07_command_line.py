"""The disclab command line, driven from Python.

Every step below can be typed in a shell as `disclab <command> ...`; here the
same entry point is called in-process so the demo is self-contained.

Run:  python demos/07_command_line.py
"""
import json
import tempfile
from pathlib import Path

from disclab.cli import run_command

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    inst, cert, coloring = tmp / "a.txt", tmp / "cert.json", tmp / "u.txt"

    def sh(*argv):
        print("$ disclab " + " ".join(str(a).replace(str(tmp) + "/", "") for a in argv))
        code = run_command([str(a) for a in argv])
        print(f"[exit {code}]\n")
        return code

    sh("gen", "gaussian", "--m", 6, "--n", 8, "--seed", 5, "--out", inst)
    sh("solve", "--in", inst, "--trials", 4, "--out", coloring)
    sh("brute", "--in", inst)
    sh("round", "--in", inst, "--coloring", coloring, "--trials", 100)
    sh("cert-search", "--in", inst, "--iters", 20, "--out", cert)
    sh("cert-verify", "--in", inst, "--cert", cert)
    sh("trace", "--in", inst, "--cert", cert)

    # an overweight certificate is rejected (exit 2) and then refuted
    c = json.loads(cert.read_text())
    c["w"] = [1.2 / len(c["w"])] * len(c["w"])
    cert.write_text(json.dumps(c))
    sh("cert-verify", "--in", inst, "--cert", cert)
    sh("witness", "--in", inst, "--cert", cert)

    sh("report", "--in", inst, "--no-timings", "--table", "--out", tmp / "report.json")
