import sys
from pathlib import Path

import numpy as np
import pytest

from hankelscope import Ball, Bidisk, Egg, PolygonShadow

sys.path.insert(0, str(Path(__file__).parent))

FLAT_TOP = ((0, 1), (0.5, 1), (1, 0))


def quarter_circle_polygon(n=256, radius=1.0):
    th = np.linspace(0.0, np.pi / 2, n)
    verts = [(radius * float(np.sin(t)), radius * float(np.cos(t))) for t in th]
    verts[0], verts[-1] = (0.0, radius), (radius, 0.0)
    return PolygonShadow(tuple(verts))


@pytest.fixture
def bidisk():
    return Bidisk(1.0, 1.0)


@pytest.fixture
def ball():
    return Ball(1.0)


@pytest.fixture
def egg():
    return Egg(2.0, 4.0)


@pytest.fixture
def flat_top():
    return PolygonShadow(FLAT_TOP)


@pytest.fixture(params=["bidisk", "ball", "egg", "flat_top"])
def preset(request):
    return {
        "bidisk": Bidisk(1.0, 1.0),
        "ball": Ball(1.0),
        "egg": Egg(2.0, 4.0),
        "flat_top": PolygonShadow(FLAT_TOP),
    }[request.param]


ACCEPTANCE_LINES = []


def record_acceptance(number, title, ok, detail=""):
    """Print and remember one pass/fail line for an acceptance criterion."""
    line = f"[criterion {number}] {'PASS' if ok else 'FAIL'}: {title}" + (f" ({detail})" if detail else "")
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip("]"))):
            terminalreporter.write_line(line)
