import json

import pytest

from godsplit.model import serialize_model

from helpers import god_system, tree_json


@pytest.fixture()
def god_model_path(tmp_path):
    path = tmp_path / "system.json"
    path.write_text(serialize_model(god_system()), encoding="utf-8")
    return path


@pytest.fixture()
def tree_model_path(tmp_path):
    path = tmp_path / "tree.json"
    path.write_text(json.dumps(tree_json()), encoding="utf-8")
    return path
