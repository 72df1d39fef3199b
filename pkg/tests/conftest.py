import re


def pytest_terminal_summary(terminalreporter):
    rows = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py" not in getattr(rep, "nodeid", "") or rep.when != "call":
                continue
            m = re.search(r"test_c(\d+)_(\w+)", rep.nodeid)
            if not m:
                continue
            detail = dict(rep.user_properties).get("detail", "")
            rows.append((int(m.group(1)), m.group(2), rep.passed, detail))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for n, name, ok, detail in sorted(rows):
        line = f"criterion {n:2d} {name:28s} {'PASS' if ok else 'FAIL'}"
        if detail:
            line += f"  {detail}"
        terminalreporter.write_line(line)
