"""End-to-end smoke tests for the Python bindings.

Exact expectations here (entropy values, effective dimensions) mirror the
C++ unit suite; the point of this file is that the compiled module loads
and the JSON boundary behaves, not to re-prove the math.
"""

import json
import math

import numpy as np
import pytest

import qrflab


def test_version_matches_package():
    assert qrflab.version() == qrflab.__version__
    assert qrflab.version().count(".") == 2


def test_presets_listed_with_descriptions():
    names = qrflab.list_presets()
    assert "z2-ideal-pair" in names
    assert "z3-tradeoff-violation" in names
    for name in names:
        assert qrflab.preset_description(name)


def test_preset_config_round_trips():
    text = qrflab.preset_config("z2-ideal-pair")
    cfg = json.loads(text)
    assert cfg["group"] == {"kind": "cyclic", "n": 2}
    assert qrflab.canonical_config(text) == text
    assert qrflab.config_hash(text) == qrflab.config_hash(text)
    assert qrflab.config_hash(text).startswith("fnv1a64:")


def test_run_preset_passes_and_is_deterministic():
    first = qrflab.run_preset("z2-ideal-pair", trials=5)
    second = qrflab.run_preset("z2-ideal-pair", trials=5)
    assert first == second
    report = json.loads(first)
    assert report["all_pass"] is True
    by_name = {c["name"]: c for c in report["checks"]}
    assert by_name["lemma1"]["trials_run"] == 5
    assert by_name["povm"]["max_residual"] < 1e-9


def test_run_config_accepts_inline_json():
    cfg = {
        "group": {"kind": "cyclic", "n": 3},
        "frames": [{"ideal": True}, {"ideal": True}],
        "trials": 3,
        "checks": ["theorem1", "povm"],
    }
    report = json.loads(qrflab.run_config(json.dumps(cfg), seed=7))
    assert report["rng_seed"] == 7
    assert report["all_pass"] is True
    assert [c["name"] for c in report["checks"]] == ["theorem1", "povm"]


def test_bad_config_raises_value_error():
    with pytest.raises(ValueError, match="frames"):
        qrflab.run_config("{\"group\": {\"kind\": \"cyclic\", \"n\": 2}}")
    with pytest.raises(ValueError, match="klein"):
        qrflab.canonical_config(
            "{\"group\": {\"kind\": \"klein\", \"n\": 4}, \"frames\": []}"
        )


def test_renyi_entropy_values():
    assert qrflab.renyi_entropy(np.array([1.0, 0.0])) == pytest.approx(0.0)
    d = 5
    uniform = np.full(d, 1.0 / d)
    assert qrflab.renyi_entropy(uniform, alpha=2.0) == pytest.approx(math.log(d))
    assert qrflab.renyi_entropy(uniform, base_two=True) == pytest.approx(math.log2(d))
    spectrum = np.array([0.75, 0.25])
    assert qrflab.renyi_entropy(spectrum, alpha=2.0) == pytest.approx(-math.log(0.625))
    with pytest.raises(ValueError):
        qrflab.renyi_entropy(uniform, alpha=0.0)


def test_density_entropy_matches_spectrum():
    rho = np.diag([0.75, 0.25]).astype(complex)
    assert qrflab.density_entropy(rho, alpha=2.0) == pytest.approx(-math.log(0.625))


def test_coherence_of_plus_state():
    plus = np.full((2, 2), 0.5, dtype=complex)
    assert qrflab.coherence(plus) == pytest.approx(math.log(2.0))
    assert qrflab.coherence(plus, base_two=True) == pytest.approx(1.0)
    assert qrflab.coherence(np.diag([0.5, 0.5]).astype(complex)) == pytest.approx(0.0)


def test_effective_dimension_examples():
    # Worked two-element-group example: one-dimensional target sector.
    assert qrflab.effective_dimension("cyclic", 2, [1, 0], [1, 1], [1, 1]) == 1
    # Ideal frames saturate at the group order.
    assert qrflab.effective_dimension("cyclic", 3, [1, 1, 1], [1, 1, 1], [1, 1, 1]) == 3
    dims = dict(qrflab.irrep_dimensions("symmetric", 3))
    assert sorted(dims.values()) == [1, 1, 2]
    ideal = [d for _, d in qrflab.irrep_dimensions("symmetric", 3)]
    assert qrflab.effective_dimension("symmetric", 3, ideal, ideal, ideal) == 6
