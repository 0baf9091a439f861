from collections import OrderedDict

ACCEPTANCE = OrderedDict()


def record_criterion(number: int, part: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number} [{part}]: {detail}"
    print(line)
    ACCEPTANCE.setdefault(number, []).append((ok, part, detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[number]
        ok = all(p[0] for p in parts)
        detail = "; ".join(f"{name}: {d}{'' if good else ' (FAIL)'}" for good, name, d in parts)
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
