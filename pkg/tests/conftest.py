from __future__ import annotations

from hypothesis import HealthCheck, settings

settings.register_profile("twistlab", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("twistlab")


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
