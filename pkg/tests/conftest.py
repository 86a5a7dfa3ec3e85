import csv
import random
import sys

import pytest

from gbd.store import Store

from generators import random_store_content


@pytest.fixture
def store(tmp_path):
    return Store(tmp_path / "test.db")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per release criterion that ran (test_acceptance)."""
    del exitstatus, config
    module = sys.modules.get("test_acceptance") or sys.modules.get(
        "tests.test_acceptance"
    )
    if module is None:
        return
    verdicts: dict[str, bool] = {}
    for reports in terminalreporter.stats.values():
        for report in reports:
            nodeid = getattr(report, "nodeid", "")
            passed = getattr(report, "passed", None)
            if passed is None or "::" not in nodeid:
                continue
            name = nodeid.rsplit("::", 1)[1]
            if name not in module.CRITERIA:
                continue
            if getattr(report, "when", None) == "call" or not passed:
                verdicts[name] = verdicts.get(name, True) and passed
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for name, label in module.CRITERIA.items():
        if name not in verdicts:
            continue
        verdict = "PASS" if verdicts[name] else "FAIL"
        detail = module.METRICS.get(name)
        line = f"{verdict}  {label}"
        if verdicts[name] and detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)


def build_random_store(tmp_path, rng: random.Random, max_instances: int = 100) -> Store:
    """Materialize one randomized store on disk and return it.

    Values go in through the CSV importer: one transaction instead of
    one per value, which keeps large randomized suites fast.
    """
    tag = rng.randrange(1 << 30)
    store = Store(tmp_path / f"rand-{tag}.db")
    groups, records = random_store_content(rng, max_instances)
    for name, kind, default, multi in groups:
        store.create_group(name, kind, default_value=default, multi_valued=multi)
    per_hash: dict[str, dict[str, list[str]]] = {}
    for name, hash_, value in records:
        per_hash.setdefault(hash_, {}).setdefault(name, []).append(value)
    names = [group[0] for group in groups]
    csv_path = tmp_path / f"rand-{tag}.csv"
    with open(csv_path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["hash", *names])
        for hash_, values in per_hash.items():
            rows = max(len(v) for v in values.values())
            for index in range(rows):
                row = [hash_]
                for name in names:
                    cell = values.get(name, ())
                    row.append(cell[index] if index < len(cell) else "")
                writer.writerow(row)
    store.import_csv(csv_path)
    return store
