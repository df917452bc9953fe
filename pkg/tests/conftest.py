import sys
from functools import lru_cache

from igmonoid.cli import corpus_dir
from igmonoid.model import load


@lru_cache(maxsize=None)
def corpus_model(name: str):
    """Parsed bundled example, shared across tests (models are immutable)."""
    return load((corpus_dir() / name).read_text())


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.line(k, *mod.RESULTS[k]))
