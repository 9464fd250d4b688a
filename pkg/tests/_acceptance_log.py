"""Collects one verdict line per acceptance criterion for the terminal summary."""
RESULTS = []


def report(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} | {detail}"
    RESULTS.append(line)
    print(line)
    return ok
