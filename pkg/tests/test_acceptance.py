"""Acceptance criteria, one registered suite each, at the default trial counts.

Every criterion prints one ``PASS``/``FAIL`` line (shown even under capture).
"""
import json

import pytest

from ppas.jump import calibrate
from ppas.suites import ACCEPTANCE, SUITES, verify_suite
from ppas.surface import SurfaceConfig

CFG = SurfaceConfig()


@pytest.fixture(scope="module")
def cal():
    return calibrate(CFG)


@pytest.mark.slow
@pytest.mark.parametrize("name", ACCEPTANCE)
def test_criterion(name, cal, capsys):
    rep = verify_suite(name, CFG, cal)
    line = f"{'PASS' if rep.ok else 'FAIL'} {name}: {rep.passes}/{rep.trials} trials in {rep.seconds:.1f}s ({SUITES[name].summary})"
    with capsys.disabled():
        print("\n" + line)
        for f in rep.failures:
            print("    " + json.dumps(f, default=str)[:400])
    assert rep.ok, line
