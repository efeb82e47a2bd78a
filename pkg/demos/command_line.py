"""
Driving the analyses from the command line
==========================================

Every library capability has a subcommand.  This script shells out to the
installed entry point and shows the exit-code contract: 0 on success, 1 when
--strict meets a violated inequality, 2 on usage errors.
"""

import json
import subprocess
import sys

BASE = [sys.executable, "-m", "bellmodel"]


def run(*args):
    proc = subprocess.run(BASE + list(args), capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


code, out, _ = run("chsh", "--mode", "conditional", "--format", "json")
doc = json.loads(out)
print("chsh conditional:", doc["combined_value"], "exit", code)

code, out, _ = run("chsh", "--mode", "partial", "--format", "json")
doc = json.loads(out)
print("chsh partial:    ", doc["combined_value"], "exit", code)

# --strict turns a violated inequality into exit code 1
code, _, _ = run("chsh", "--strict")
print("chsh --strict on the violating configuration -> exit", code)

code, out, _ = run("bell", "--format", "json")
doc = json.loads(out)
print("bell lhs/rhs:", doc["lhs"], doc["rhs"], "exit", code)

code, out, _ = run("measure", "--settings", "1,0,0,0", "--format", "csv")
print()
print("measure with all mass on the first setting pair:")
print(out)

code, out, _ = run("witness", "--format", "json", "--grid", "2000")
doc = json.loads(out)
print("witness contradiction:", doc["contradiction"], "amplitude", doc["response_amplitude_max"])

# deterministic sampling: identical bytes for identical seeds
_, first, _ = run("sample", "--n", "3", "--seed", "42")
_, second, _ = run("sample", "--n", "3", "--seed", "42")
print()
print("sample --n 3 --seed 42 twice:")
print(first, end="")
print("byte-identical:", first == second)

# usage errors land on stderr with exit 2
code, _, err = run("measure", "--angles", "1,2")
print()
print("bad flag -> exit", code, "stderr:", err.strip())
