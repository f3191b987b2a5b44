import re

_VERDICTS: dict[int, tuple[str, str]] = {}
_CRITERION = re.compile(r'test_acceptance\.py::test_criterion_(\d+)$')


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if m is None or (report.when != 'call' and report.passed):
        return
    detail = dict(report.user_properties).get('detail', '')
    if not detail and report.failed:
        detail = report.longreprtext.strip().splitlines()[-1] if report.longreprtext else 'error'
    n = int(m.group(1))
    if report.when == 'call' or n not in _VERDICTS:
        _VERDICTS[n] = ('PASS' if report.passed else 'FAIL', detail)


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section('acceptance criteria')
    for n in sorted(_VERDICTS):
        verdict, detail = _VERDICTS[n]
        terminalreporter.write_line(f'criterion {n}: {verdict}  {detail}')
