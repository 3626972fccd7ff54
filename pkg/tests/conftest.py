import functools

import pytest

from cleftlab.gallery import build_gallery
from cleftlab.linalg import Field

QQ = Field()
F5 = Field(5)

ACCEPTANCE = {}


@functools.lru_cache(maxsize=None)
def gallery(ident, p=None, n=2):
    """Cached gallery instance (treat as read-only)."""
    return build_gallery(ident, Field(p), n=n)


@pytest.fixture
def record_criterion():
    def record(number, title, ok, detail=""):
        ACCEPTANCE[number] = (title, ok, detail)
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line("criterion %2d: %s  %s%s" % (number, "PASS" if ok else "FAIL", title,
                                                               "  (%s)" % detail if detail else ""))
