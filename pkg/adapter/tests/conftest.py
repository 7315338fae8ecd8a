import json
import pathlib

import pytest

DATA = pathlib.Path(__file__).parent / "data"


def load_golden(name):
    return json.loads((DATA / f"golden_{name}.json").read_text())


def golden_config(golden):
    """Turn the golden file's CLI flag list into a connect() config dict."""
    flags = golden["schedule_args"]
    return {
        flags[i].lstrip("-"): flags[i + 1] for i in range(0, len(flags), 2)
    }


@pytest.fixture(scope="session")
def demo_report(tmp_path_factory):
    from curlearn_adapter.demo import demo_run

    out = tmp_path_factory.mktemp("demo")
    return demo_run(out, n_per_class=40, seed=11, epochs=40), out
