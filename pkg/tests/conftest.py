import json
from pathlib import Path

import pytest

from wordlayers.synth import write_jsonl

REPO = Path(__file__).resolve().parent.parent
WORLDCUP_CONFIG = REPO / "worldcup2022.config"
SAMPLE_CONFIG = REPO / "samples" / "sample.config"


@pytest.fixture
def jsonl_file(tmp_path):
    def make(records, name="corpus.jsonl"):
        path = tmp_path / name
        with open(path, "w", encoding="utf-8") as fh:
            for rec in records:
                fh.write(rec if isinstance(rec, str) else json.dumps(rec, ensure_ascii=False))
                fh.write("\n")
        return path

    return make


@pytest.fixture(scope="session")
def corpus_5000(tmp_path_factory):
    path = tmp_path_factory.mktemp("corpora") / "synthetic_5000.jsonl"
    write_jsonl(path, 5000, seed=11)
    return path


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): exit criterion of the build")
    config._acceptance = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    key = marker.args[0]
    title = marker.args[1]
    results = item.config._acceptance
    failed = rep.failed or (rep.when == "setup" and rep.skipped)
    if rep.when == "call" or failed:
        prev = results.get(key, (title, "PASS"))
        results[key] = (title, "FAIL" if failed or prev[1] == "FAIL" else "PASS")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = getattr(config, "_acceptance", {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results):
        title, status = results[key]
        terminalreporter.write_line(f"[{status}] criterion {key}: {title}")
