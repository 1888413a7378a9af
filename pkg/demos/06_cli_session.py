"""
A command-line session
======================

The same steps through the ``zetaifs`` command: compute zeros into a
resumable store, extend it, verify against the bundled table and run the
residual checks. Equivalent shell commands are printed alongside.
"""

import os
import tempfile

from zetaifs.cli import main

workdir = tempfile.mkdtemp()
store = os.path.join(workdir, "zeros.jsonl")


def run(*args):
    print("$ zetaifs " + " ".join(args))
    code = main(list(args))
    print("exit", code)


run("zeros", "--n-end", "10", "--store", store, "--quiet")
run("zeros", "--n-end", "20", "--store", store, "--quiet")  # resumes at n = 11
run("verify", "--store", store, "-o", os.path.join(workdir, "verify.csv"))
run("residuals", "--store", store, "-o", os.path.join(workdir, "residuals.csv"))
run("eval", "--t", "18")

with open(os.path.join(workdir, "verify.csv")) as fh:
    print("".join(fh.readlines()[:4]))
