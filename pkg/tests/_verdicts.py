"""PASS/FAIL lines of the acceptance suite, keyed by criterion number."""

VERDICTS: dict[int, str] = {}


def record(n: int, label: str, ok: bool, detail: str = "") -> bool:
    line = f"{'PASS' if ok else 'FAIL'} criterion {n:>2}: {label}"
    if detail:
        line += f" ({detail})"
    VERDICTS[n] = line
    print(line)
    return ok
