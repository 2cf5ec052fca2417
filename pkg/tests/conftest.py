import re

_CRITERION = re.compile(r"test_c(\d+)_(\w+)")


def pytest_runtest_logreport(report):
    """Emit one status line per acceptance criterion as it finishes."""
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    match = _CRITERION.match(name)
    if match is None:
        return
    num, slug = match.groups()
    status = "PASS" if report.passed else "FAIL"
    print(f"\ncriterion {num} ({slug.replace('_', '-')}): {status}", flush=True)
