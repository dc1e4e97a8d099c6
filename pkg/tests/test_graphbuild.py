import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from embedcut.embedspace import SimilarityMatrix
from embedcut.errors import InputError
from embedcut.graphbuild import (
    CLAMP_EPS,
    CalibrationTerm,
    build_graph,
    calibration_bias,
    load_edge_list,
    logit_weights,
    minmax_normalize,
)


def sim_from_pairs(values):
    values = np.asarray(values, dtype=np.float32)
    n = int(round((1 + math.sqrt(1 + 8 * values.size)) / 2))
    return SimilarityMatrix(n=n, values=values)


class TestCalibrationTerm:
    @pytest.mark.parametrize("bad", [0.0, 1.0, -0.2, 1.5])
    def test_open_interval_enforced(self, bad):
        with pytest.raises(InputError, match=r"\(0, 1\)"):
            CalibrationTerm(bad)

    def test_accepts_interior_values(self):
        assert CalibrationTerm(0.5).value == 0.5


class TestMinmaxNormalize:
    def test_affine_map_endpoints(self):
        normalized, lo, hi = minmax_normalize(sim_from_pairs([-0.5, 0.0, 0.5]))
        np.testing.assert_allclose(normalized, [0.0, 0.5, 1.0], atol=1e-9)
        assert (lo, hi) == (-0.5, 0.5)

    def test_all_equal_is_degenerate(self):
        with pytest.raises(InputError, match="degenerate"):
            minmax_normalize(sim_from_pairs([0.3, 0.3, 0.3]))

    def test_two_point_map(self):
        normalized, _, _ = minmax_normalize(sim_from_pairs([0.2, 0.6, 0.4]))
        np.testing.assert_allclose(normalized, [0.0, 1.0, 0.5], atol=1e-7)

    def test_single_item_rejected(self):
        with pytest.raises(InputError, match="at least 2"):
            minmax_normalize(SimilarityMatrix(n=1, values=np.empty(0, dtype=np.float32)))


class TestWeightTransform:
    def test_boundary_weight_is_zero(self):
        # s' = cal = 0.5: log-odds and bias both vanish
        w = logit_weights(np.array([0.5])) + calibration_bias(CalibrationTerm(0.5))
        assert w[0] == 0.0

    def test_hand_evaluated_ln4(self):
        w = logit_weights(np.array([0.8])) + calibration_bias(CalibrationTerm(0.5))
        assert w[0] == pytest.approx(math.log(4.0), abs=1e-12)

    def test_hand_evaluated_negative_bias(self):
        w = logit_weights(np.array([0.5])) + calibration_bias(CalibrationTerm(0.7))
        assert w[0] == pytest.approx(math.log(0.3 / 0.7), abs=1e-12)
        assert w[0] == pytest.approx(-0.8473, abs=1e-4)

    def test_pipeline_weights_through_graph(self):
        graph = build_graph(sim_from_pairs([0.0, 0.8, 1.0]), CalibrationTerm(0.5))
        assert graph.weight(0, 2) == pytest.approx(math.log(4.0), abs=1e-6)
        assert graph.weight(0, 1) == pytest.approx(math.log(CLAMP_EPS / (1 - CLAMP_EPS)), abs=1e-9)
        assert graph.weight(1, 2) == pytest.approx(math.log((1 - CLAMP_EPS) / CLAMP_EPS), abs=1e-9)
        assert graph.cal == 0.5 and graph.norm_min == 0.0 and graph.norm_max == 1.0

    def test_naive_transform_recovered_at_half(self):
        s = np.linspace(0.0, 1.0, 101)
        assert calibration_bias(CalibrationTerm(0.5)) == 0.0
        with_bias = logit_weights(s) + calibration_bias(CalibrationTerm(0.5))
        assert np.array_equal(with_bias, logit_weights(s))

    def test_monotone_in_similarity(self):
        s = np.linspace(CLAMP_EPS, 1 - CLAMP_EPS, 500)
        w = logit_weights(s) + calibration_bias(CalibrationTerm(0.3))
        assert np.all(np.diff(w) > 0)

    @settings(max_examples=200, deadline=None)
    @given(
        s=st.floats(0.001, 0.999),
        cal=st.floats(0.001, 0.999),
    )
    def test_sign_matches_boundary(self, s, cal):
        w = float(logit_weights(np.array([s]))[0] + calibration_bias(CalibrationTerm(cal)))
        if abs(s - cal) > 1e-12:
            assert math.copysign(1, w) == math.copysign(1, s - cal)

    @settings(max_examples=100, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), cal=st.floats(0.01, 0.99))
    def test_clamp_bounds(self, seed, cal):
        rng = np.random.default_rng(seed)
        s = rng.uniform(0, 1, size=50)
        w = logit_weights(s) + calibration_bias(CalibrationTerm(cal))
        bound = math.log((1 - CLAMP_EPS) / CLAMP_EPS) + abs(math.log((1 - cal) / cal))
        assert np.all(np.abs(w) <= bound + 1e-9)

    def test_flipped_bias_negates(self):
        cal = CalibrationTerm(0.7)
        assert calibration_bias(cal, "flipped") == -calibration_bias(cal, "paper")

    def test_unknown_bias_sign(self):
        with pytest.raises(InputError, match="bias_sign"):
            calibration_bias(CalibrationTerm(0.5), "sideways")

    def test_weights_always_finite(self):
        graph = build_graph(sim_from_pairs([0.0, 1.0, 0.5]), CalibrationTerm(0.01))
        assert np.isfinite(graph.weights).all()


class TestEdgeList:
    def test_parse_with_comments(self, tmp_path):
        p = tmp_path / "g.txt"
        p.write_text("# three nodes\n0 1 2.0\n\n0 2 1.0\n1 2 -3.0\n", encoding="utf-8")
        graph = load_edge_list(p)
        assert graph.n == 3
        assert graph.weight(0, 1) == 2.0
        assert graph.weight(2, 1) == -3.0

    def test_unlisted_pairs_default_to_zero(self, tmp_path):
        p = tmp_path / "g.txt"
        p.write_text("0 3 1.5\n", encoding="utf-8")
        graph = load_edge_list(p)
        assert graph.n == 4
        assert graph.weight(1, 2) == 0.0

    @pytest.mark.parametrize(
        "content,pattern",
        [
            ("0 0 1.0\n", "self-loop"),
            ("0 1 2.0\n1 0 3.0\n", "duplicate"),
            ("0 one 2.0\n", "parse"),
            ("0 1\n", "expected"),
            ("", "no edges"),
            ("# nothing\n", "no edges"),
            ("-1 2 0.5\n", "negative"),
        ],
    )
    def test_malformed_rejected(self, tmp_path, content, pattern):
        p = tmp_path / "g.txt"
        p.write_text(content, encoding="utf-8")
        with pytest.raises(InputError, match=pattern):
            load_edge_list(p)
