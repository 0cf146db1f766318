import os
import shutil

import pytest

from delphi.backend import BackendConfig

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def backend_command():
    env = os.environ.get("DELPHI_SMT_SOLVER")
    if env:
        return env
    wrapper = os.path.join(REPO_ROOT, "tools", "z3cli.mjs")
    if os.path.exists(wrapper) and shutil.which("node"):
        return f"node {wrapper}"
    if shutil.which("z3"):
        return "z3 -in"
    if shutil.which("cvc5"):
        return "cvc5 --lang smt2"
    pytest.fail(
        "no SMT backend available: set DELPHI_SMT_SOLVER or run "
        "`npm install` inside tools/ (see README)", pytrace=False)


@pytest.fixture(scope="session")
def backend_cfg():
    return BackendConfig(command=backend_command())


@pytest.fixture(scope="session")
def oracle_dir(tmp_path_factory):
    return str(tmp_path_factory.mktemp("oracles"))
