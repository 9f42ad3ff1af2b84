import json
import os

import pytest

DATA = os.path.join(os.path.dirname(__file__), "fixtures", "data")


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run the exhaustive sweeps marked slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow") or os.environ.get("TROPAMALG_SLOW"):
        return
    skip = pytest.mark.skip(reason="slow sweep: use --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def load_data(name):
    with open(os.path.join(DATA, name), encoding="utf-8") as fh:
        return json.load(fh)


# criterion number -> (ok, detail), filled in by test_acceptance
ACCEPTANCE = {}


def acceptance_lines():
    lines = []
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        lines.append(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
    return lines


def pytest_terminal_summary(terminalreporter):
    lines = acceptance_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
