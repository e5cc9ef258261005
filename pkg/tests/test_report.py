import json

import numpy as np
import pytest

from moufang.report import CheckReport, failure, skipped, timed_check


def test_fail_needs_counterexample():
    with pytest.raises(ValueError):
        CheckReport("x", status="fail")
    rep = failure("x", (1, 2))
    assert rep.failed and not rep and rep.counterexample == (1, 2)


def test_sampled_needs_seed():
    with pytest.raises(ValueError):
        CheckReport("x", mode="sampled")
    assert CheckReport("x", mode="sampled", seed=0).passed


def test_skipped_reason():
    rep = skipped("x", "why")
    assert rep.skipped and rep.reason == "why" and not rep.passed


def test_to_dict_is_json_ready():
    rep = failure("x", (np.int64(3), np.int32(4)), details={np.int64(1): np.bool_(True), "a": (np.float64(0.5),)})
    d = rep.to_dict()
    text = json.dumps(d)
    assert json.loads(text)["counterexample"] == [3, 4]
    assert d["details"] == {"1": True, "a": [0.5]}
    assert "timing_ms" not in rep.to_dict(timing=False)


def test_timed_check_stamps_time():
    @timed_check
    def check():
        return CheckReport("t")

    assert check().timing_ms >= 0.0
