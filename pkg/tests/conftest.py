from __future__ import annotations

from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    max_examples=25,
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print one pass/fail line per acceptance criterion at the end of a run."""
    lines = []
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            if "test_acceptance" not in getattr(rep, "nodeid", ""):
                continue
            name = rep.nodeid.split("::")[-1]
            lines.append((name, status.upper()))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in sorted(lines):
        terminalreporter.write_line(f"{status:6s} {name}")
