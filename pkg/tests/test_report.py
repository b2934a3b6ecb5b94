import json
import math

import numpy as np
import pytest

from nbspec.report import FAIL, NOT_APPLICABLE, PASS, VerificationReport, dumps, status_of, to_jsonable


def test_fail_needs_evidence():
    with pytest.raises(ValueError):
        VerificationReport("x", FAIL)
    VerificationReport("x", FAIL, residual=0.5)
    VerificationReport("x", FAIL, metadata={"counterexample": [1]})


def test_unknown_status():
    with pytest.raises(ValueError):
        VerificationReport("x", "maybe")


def test_status_of():
    assert status_of(True) == PASS and status_of(False) == FAIL


def test_jsonable_types():
    r = VerificationReport("c", NOT_APPLICABLE, metadata={"v": np.array([1.0, 2.0]), "z": 1 + 2j, "b": np.bool_(1)})
    d = to_jsonable(r)
    assert d["metadata"] == {"v": [1.0, 2.0], "z": [1.0, 2.0], "b": True}
    assert to_jsonable(math.nan) is None and to_jsonable(-0.0) == 0.0
    assert to_jsonable(np.int64(3)) == 3


def test_dumps_stable_precision():
    a = dumps({"b": 0.1 + 0.2, "a": [1 / 3]})
    assert a == dumps({"a": [1 / 3], "b": 0.30000000000000004})
    assert json.loads(a)["b"] == 0.3
    assert a.index('"a"') < a.index('"b"')
