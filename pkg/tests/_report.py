"""PASS/FAIL lines for the acceptance criteria, echoed in the pytest summary."""

import contextlib
import time

LINES: list[str] = []


def record(line: str) -> None:
    print(line)
    LINES.append(line)


@contextlib.contextmanager
def criterion(num, name: str, expect_fail: bool = False):
    t0 = time.perf_counter()
    try:
        yield
    except BaseException as e:
        tag = "FAIL (expected)" if expect_fail else "FAIL"
        record(f"criterion {num} {name}: {tag} [{time.perf_counter() - t0:.1f}s] {type(e).__name__}: {e}")
        raise
    record(f"criterion {num} {name}: PASS [{time.perf_counter() - t0:.1f}s]")
