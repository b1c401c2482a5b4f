#!/usr/bin/env python3
# Copyright 2026 The diracwalk Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Checks the exit-status contract of the diracwalk command line.

Usage: cli_exit_codes.py <diracwalk-cli> <work-dir>

0 success, 2 invalid configuration, arguments or input files, 3 resource
refusal, 1 any other failure.
"""

import json
import pathlib
import subprocess
import sys


def main():
    cli, work = sys.argv[1], pathlib.Path(sys.argv[2])
    work.mkdir(parents=True, exist_ok=True)
    failures = []

    def expect(label, code, args, stdout_prefix=None):
        r = subprocess.run([cli, *args], capture_output=True, text=True)
        ok = r.returncode == code
        if ok and stdout_prefix is not None:
            ok = r.stdout.startswith(stdout_prefix)
        print(("ok   " if ok else "FAIL ") + f"{label}: exit {r.returncode} (want {code})")
        if not ok:
            print(r.stdout[:400] + r.stderr[:400])
            failures.append(label)
        return r

    small = ["-s", "gatecount.q_max=5", "-q"]
    expect("gatecount succeeds", 0, ["gatecount", "-o", str(work / "gc"), *small])
    expect("unknown config key", 2, ["gatecount", "-o", str(work / "x"), "-s", "grid.nn=3"])
    expect("wrong value type", 2, ["gatecount", "-o", str(work / "x"), "-s", "grid.n=\"big\""])
    expect("non power of two grid", 2, ["klein", "-o", str(work / "x"), "--n", "100"])
    expect("odd product-formula order", 2, ["convergence", "-o", str(work / "x"), "--order", "3"])
    expect("dimension mismatch", 2, ["zb3d", "-o", str(work / "x"), "-s", "grid.dim=1"])
    expect("unknown flag", 2, ["zb1d", "--bogus"])
    expect("missing subcommand", 2, [])
    expect("qubit cap", 3, ["zb3d", "-o", str(work / "x"), "--n", "512", "-q"])
    expect("missing config file", 2, ["zb1d", "-c", str(work / "missing.json")])
    expect("missing spectrum file", 2, ["spectrum", str(work / "missing.txt")])

    # A resolved config reproduces the run's hash from another directory.
    resolved = work / "gc" / "resolved_config.json"
    expect("rerun from resolved config", 0, ["gatecount", "-c", str(resolved), "-o", str(work / "gc2"), "-q"])
    h1 = json.loads((work / "gc" / "summary.json").read_text())["config_hash"]
    h2 = json.loads((work / "gc2" / "summary.json").read_text())["config_hash"]
    same = h1 == h2 and (work / "gc" / "gatecount.csv").read_bytes() == (work / "gc2" / "gatecount.csv").read_bytes()
    print(("ok   " if same else "FAIL ") + "resolved config reproduces hash and CSV")
    if not same:
        failures.append("reproduce")

    expect("circuit export", 0, ["circuit", "-e", "convergence", "-f", "qasm3", "--n", "16"], "OPENQASM 3")
    expect("circuit bad format", 2, ["circuit", "-e", "convergence", "-f", "pdf"])
    values = work / "values.txt"
    values.write_text("1 1 -1 -1\n")
    expect("spectrum dump", 0, ["spectrum", str(values)], "# walsh spectrum q=2")
    values.write_text("1 2 3\n")
    expect("spectrum bad length", 2, ["spectrum", str(values)])

    if failures:
        print(f"{len(failures)} checks failed")
        return 1
    print("all checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
