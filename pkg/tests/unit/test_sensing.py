"""
Unit tests for code generation, coded capture simulation and centerview estimators
"""

import pytest
import numpy as np

from lf_core.errors import CodedModelError, LightFieldIOError, LightFieldShapeError, LightFieldValueError
from lf_core.light_field import CENTER, LightField, get_view
from lf_sensing import (
    CodedImage,
    CodedModel,
    CodeGenerator,
    CodeNormalizedCenterView,
    GivenFileCenterView,
    OracleCenterView,
    Scheme,
    capture_focus_defocus,
    gen_aperture_model,
    gen_aperture_models,
    gen_clf_model,
    gen_defocus_model,
    gen_pinhole_model,
    regenerate_model,
    simulate,
    simulate_raw,
)
from lf_sensing.models import clipped_fraction, expected_clipped_fraction
from protocols import CenterViewEstimatorProtocol


def _flat_lf(center: np.ndarray, angular=(5, 5)) -> LightField:
    """Zero-disparity light field: every view equals ``center``"""
    return LightField(np.broadcast_to(center, angular + center.shape))


@pytest.mark.unit
class TestCodeGenerator:
    """Test cases for CodeGenerator"""

    def test_same_seed_same_stream(self):
        """Test two generators with one seed agree value for value"""
        a = CodeGenerator(11).gaussian((7, 9), 0.5, 0.25)
        b = CodeGenerator(11).gaussian((7, 9), 0.5, 0.25)

        np.testing.assert_array_equal(a, b)

    def test_different_seeds_differ(self):
        """Test different seeds give different codes"""
        assert not np.array_equal(CodeGenerator(1).uniform((10,)), CodeGenerator(2).uniform((10,)))

    def test_gaussian_moments(self):
        """Test Box-Muller output has the requested mean and spread"""
        values = CodeGenerator(0).gaussian((200_000,), 0.5, 0.25)

        assert values.mean() == pytest.approx(0.5, abs=0.005)
        assert values.std() == pytest.approx(0.25, abs=0.005)

    def test_odd_count(self):
        """Test an odd number of values is truncated from the interleaved pairs"""
        assert CodeGenerator(3).gaussian((3, 3)).shape == (3, 3)


@pytest.mark.unit
class TestCodedModels:
    """Test cases for the model generators"""

    def test_clf_shape_and_range(self):
        """Test CLF weights cover the sensor and lie in [0, 1]"""
        model = gen_clf_model(5, 5, tile=8, seed=1, spatial_shape=(20, 24))

        assert model.weights.shape == (5, 5, 20, 24)
        assert model.weights.min() >= 0.0
        assert model.weights.max() <= 1.0
        assert model.scheme is Scheme.CLF

    def test_clf_views_are_shifted_tilings(self):
        """Test view (q_u, q_v) sees the pattern shifted by shift_per_view * q"""
        model = gen_clf_model(3, 3, tile=6, seed=2, shift_per_view=2, spatial_shape=(12, 12))
        center = model.weights[1, 1]

        np.testing.assert_array_equal(model.weights[2, 1], np.roll(center, 2, axis=0))
        np.testing.assert_array_equal(model.weights[1, 0], np.roll(center, -2, axis=1))

    def test_clf_is_periodic(self):
        """Test the code repeats with the tile period"""
        model = gen_clf_model(3, 3, tile=5, seed=4, spatial_shape=(15, 15))

        np.testing.assert_array_equal(model.weights[:, :, :5, :5], model.weights[:, :, 5:10, 10:15])

    def test_clf_reference_code(self):
        """Test the seed 7, 15x15 tile, 7x7 view code of the pcg64-boxmuller-v1 stream.

        225 draws put one binomial standard deviation of the clipped share at about 0.014;
        this stream lands 7 samples on the clip bounds, 1.1 sigma below the 0.0455 tail mass.
        """
        model = gen_clf_model(7, 7, tile=15, seed=7)

        assert model.weights.mean() == pytest.approx(0.5, abs=0.02)
        assert clipped_fraction(model) == pytest.approx(7 / 225)
        sigma = np.sqrt(expected_clipped_fraction() * (1.0 - expected_clipped_fraction()) / 225)
        assert abs(clipped_fraction(model) - expected_clipped_fraction()) <= 3.0 * sigma

    def test_clf_code_statistics(self):
        """Test the clipped Gaussian code has mean 0.5 and the expected clipped mass"""
        model = gen_clf_model(7, 7, tile=90, seed=7, spatial_shape=(90, 90))

        assert model.weights.mean() == pytest.approx(0.5, abs=0.02)
        assert clipped_fraction(model) == pytest.approx(expected_clipped_fraction(), abs=0.01)
        assert expected_clipped_fraction() == pytest.approx(0.0455, abs=1e-4)

    def test_clf_tile_larger_than_sensor(self):
        """Test tile sizes beyond the sensor are rejected"""
        with pytest.raises(CodedModelError):
            gen_clf_model(5, 5, tile=16, spatial_shape=(15, 40))

    def test_clf_deterministic(self):
        """Test regeneration with the same seed gives identical weights"""
        a = gen_clf_model(5, 5, tile=8, seed=9, spatial_shape=(16, 16))
        b = gen_clf_model(5, 5, tile=8, seed=9, spatial_shape=(16, 16))

        np.testing.assert_array_equal(a.weights, b.weights)

    def test_aperture_model(self):
        """Test coded-aperture weights are uniform per view and spatially constant"""
        model = gen_aperture_model(7, 7, seed=3)

        assert model.weights.shape == (7, 7, 1, 1)
        assert model.spatially_constant
        assert model.weights.min() >= 0.0
        assert model.weights.max() < 1.0
        assert model.weights_for(10, 12).shape == (7, 7, 10, 12)

    def test_aperture_shots_use_consecutive_seeds(self):
        """Test multi-shot models are seeded seed, seed + 1, ..."""
        shots = gen_aperture_models(5, 5, seed=10, shots=3)

        assert [m.seed for m in shots] == [10, 11, 12]
        np.testing.assert_array_equal(shots[1].weights, gen_aperture_model(5, 5, seed=11).weights)

    def test_defocus_and_pinhole(self):
        """Test defocus averages every view and pinhole keeps the center"""
        defocus = gen_defocus_model(3, 5)
        pinhole = gen_pinhole_model(3, 5)

        assert defocus.weight_sum(4, 4) == pytest.approx(np.ones((4, 4)), rel=1e-6)
        assert pinhole.weights[1, 2, 0, 0] == 1.0
        assert pinhole.weights.sum() == 1.0

    def test_even_angular_extent(self):
        """Test generators reject even angular extents"""
        with pytest.raises(CodedModelError):
            gen_defocus_model(4, 5)

    def test_model_rejects_out_of_range_weights(self):
        """Test CodedModel validation"""
        with pytest.raises(CodedModelError):
            CodedModel(weights=np.full((3, 3, 1, 1), 1.5), scheme=Scheme.DEFOCUS)

    def test_regenerate_from_header(self):
        """Test provenance is enough to rebuild the exact weights"""
        model = gen_clf_model(5, 5, tile=8, seed=5, spatial_shape=(16, 16))

        rebuilt = regenerate_model(model.header())

        np.testing.assert_array_equal(rebuilt.weights, model.weights)

    def test_weights_for_mismatch(self):
        """Test spatially varying models only fit their own extents"""
        model = gen_clf_model(3, 3, tile=4, spatial_shape=(8, 8))
        with pytest.raises(LightFieldShapeError):
            model.weights_for(9, 8)


@pytest.mark.unit
class TestSimulate:
    """Test cases for simulate and capture_focus_defocus"""

    def test_constant_lf_gives_constant_image(self, constant_lf):
        """Test a normalized model maps a constant light field to the same constant"""
        coded = simulate(constant_lf, gen_aperture_model(3, 3, seed=1))

        np.testing.assert_allclose(coded.data, 0.4, atol=1e-12)

    def test_pinhole_returns_center_view(self, random_lf):
        """Test the pinhole model reproduces the centerview"""
        coded = simulate(random_lf, gen_pinhole_model(5, 5))

        np.testing.assert_allclose(coded.data, get_view(random_lf, CENTER))

    def test_defocus_is_angular_mean(self, random_lf):
        """Test the defocus image is the average over views"""
        coded = simulate(random_lf, gen_defocus_model(5, 5))

        np.testing.assert_allclose(coded.data, random_lf.data.mean(axis=(0, 1)), atol=1e-7)

    def test_clf_matches_weighted_sum(self, random_lf):
        """Test the CLF capture is sum_v f L / sum_v f per pixel"""
        model = gen_clf_model(5, 5, tile=8, seed=2, spatial_shape=(16, 20))

        coded = simulate(random_lf, model)

        w = model.weights[..., np.newaxis]
        expected = (w * random_lf.data).sum(axis=(0, 1)) / w.sum(axis=(0, 1))
        np.testing.assert_allclose(coded.data, expected, rtol=1e-12)

    def test_unnormalized_capture(self, constant_lf):
        """Test that without normalization the image scales with the weight sum"""
        model = gen_defocus_model(3, 3, normalize=False)

        coded = simulate(constant_lf, model)

        assert not coded.normalized
        np.testing.assert_allclose(coded.data, 0.4 * model.weight_sum(12, 12)[..., np.newaxis], rtol=1e-6)

    def test_zero_weight_sum(self, constant_lf):
        """Test normalizing an all-zero model fails"""
        model = CodedModel(weights=np.zeros((3, 3, 1, 1)), scheme=Scheme.CODED_APERTURE)
        with pytest.raises(CodedModelError):
            simulate(constant_lf, model)

    def test_angular_mismatch(self, random_lf):
        """Test the model must match the light field's angular grid"""
        with pytest.raises(LightFieldShapeError):
            simulate_raw(random_lf.data, gen_defocus_model(3, 3))

    def test_provenance_recorded(self, random_lf):
        """Test the coded image remembers the generating model"""
        coded = simulate(random_lf, gen_aperture_model(5, 5, seed=8))

        assert coded.scheme == "coded_aperture"
        assert coded.provenance["seed"] == 8
        assert coded.provenance_known

    def test_focus_defocus_zero_disparity(self, center_texture):
        """Test the pair coincides for a zero-disparity scene"""
        allinfocus, defocus = capture_focus_defocus(_flat_lf(center_texture))

        np.testing.assert_allclose(defocus.data, allinfocus, atol=1e-12)

    def test_focus_defocus_differs_with_disparity(self, plane_scene_pos):
        """Test the pair differs once the scene has parallax"""
        allinfocus, defocus = capture_focus_defocus(plane_scene_pos.lf)

        assert np.max(np.abs(defocus.data - allinfocus)) > 1e-3

    def test_coded_image_rejects_negative(self):
        """Test CodedImage validation"""
        with pytest.raises(LightFieldValueError):
            CodedImage(data=-np.ones((4, 4)))


@pytest.mark.unit
class TestCenterViewEstimators:
    """Test cases for the centerview plug point"""

    def test_oracle(self, random_lf):
        """Test the oracle returns the ground-truth centerview"""
        estimate = OracleCenterView(random_lf).estimate([], [])

        np.testing.assert_array_equal(estimate, get_view(random_lf, CENTER))

    def test_code_normalized_exact_at_zero_disparity(self, center_texture):
        """Test the baseline recovers the centerview when every view is identical"""
        lf = _flat_lf(center_texture)
        models = [gen_clf_model(5, 5, tile=8, seed=3, spatial_shape=(32, 32), normalize=False)]
        coded = [simulate(lf, models[0])]

        estimate = CodeNormalizedCenterView().estimate(coded, models)

        np.testing.assert_allclose(estimate, get_view(lf, CENTER), atol=1e-6)

    def test_code_normalized_averages_shots(self, center_texture):
        """Test multiple shots are averaged"""
        lf = _flat_lf(center_texture)
        models = gen_aperture_models(5, 5, seed=1, shots=2)
        coded = [simulate(lf, m) for m in models]

        estimate = CodeNormalizedCenterView().estimate(coded, models)

        np.testing.assert_allclose(estimate, get_view(lf, CENTER), atol=1e-6)

    def test_code_normalized_needs_pairs(self, random_lf):
        """Test image/model counts must agree"""
        coded = [simulate(random_lf, gen_defocus_model(5, 5))]
        with pytest.raises(CodedModelError):
            CodeNormalizedCenterView().estimate(coded, [])

    def test_given_file_missing(self, tmp_path):
        """Test a missing centerview file names the path"""
        missing = tmp_path / "nope.png"
        with pytest.raises(LightFieldIOError, match="nope.png"):
            GivenFileCenterView(missing).estimate([], [])

    def test_estimators_satisfy_protocol(self, random_lf, tmp_path):
        """Test every estimator fits the centerview plug point"""
        estimators = [OracleCenterView(random_lf), GivenFileCenterView(tmp_path / "c.png"), CodeNormalizedCenterView()]

        for estimator in estimators:
            assert isinstance(estimator, CenterViewEstimatorProtocol)
        assert [e.name for e in estimators] == ["oracle", "given-file", "code-normalized-baseline"]
