import sys
from pathlib import Path

# make tests/oracles.py importable regardless of invocation directory
sys.path.insert(0, str(Path(__file__).parent))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import ACCEPTANCE_RESULTS
    except ImportError:
        return
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for label, ok, note in ACCEPTANCE_RESULTS:
        suffix = f"  ({note})" if note else ""
        terminalreporter.write_line(f"criterion {label}: {'PASS' if ok else 'FAIL'}{suffix}")
