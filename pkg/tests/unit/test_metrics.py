"""
Unit tests for image quality metrics and light-field evaluation reports
"""

import pytest
import numpy as np
from skimage.metrics import structural_similarity

from lf_core.errors import LightFieldShapeError, LightFieldValueError
from lf_core.light_field import CENTER, AngularOffset, LightField
from lf_metrics import (
    PSNR_CAP_DB,
    EvalReport,
    disparity_mae,
    error_map,
    evaluate_light_field,
    per_view_error,
    psnr,
    sign_agreement,
    ssim,
    textured_mask,
    view_table,
)


@pytest.mark.unit
class TestImageMetrics:
    """Test cases for psnr, ssim and error_map"""

    def test_psnr_identical_is_capped(self, rng):
        """Test identical images report the sentinel"""
        image = rng.uniform(size=(12, 12, 3))

        assert psnr(image, image) == PSNR_CAP_DB == 99.0

    def test_psnr_known_value(self):
        """Test PSNR of a uniform 0.1 error is 20 dB"""
        a = np.zeros((8, 8))
        b = np.full((8, 8), 0.1)

        assert psnr(a, b) == pytest.approx(20.0)

    def test_psnr_pools_channels(self):
        """Test MSE is pooled over channels before the logarithm"""
        a = np.zeros((4, 4, 3))
        b = np.zeros((4, 4, 3))
        b[..., 0] = 0.3

        assert psnr(a, b) == pytest.approx(10.0 * np.log10(1.0 / (0.09 / 3.0)))

    def test_psnr_shape_mismatch(self):
        """Test images must share a shape"""
        with pytest.raises(LightFieldShapeError):
            psnr(np.zeros((4, 4)), np.zeros((4, 5)))

    def test_ssim_identical(self, rng):
        """Test SSIM of an image with itself is 1"""
        image = rng.uniform(size=(16, 16, 1))

        assert ssim(image, image) == pytest.approx(1.0)

    def test_ssim_matches_reference_implementation(self, rng):
        """Test agreement with scikit-image under the Gaussian-window convention"""
        a = rng.uniform(size=(20, 24, 3))
        b = np.clip(a + rng.normal(scale=0.05, size=a.shape), 0.0, 1.0)

        expected = structural_similarity(
            a, b, data_range=1.0, channel_axis=-1, gaussian_weights=True, sigma=1.5, use_sample_covariance=False
        )
        assert ssim(a, b) == pytest.approx(expected)

    def test_ssim_drops_with_noise(self, rng):
        """Test noisier copies score lower"""
        a = rng.uniform(size=(16, 16))
        slightly = np.clip(a + rng.normal(scale=0.02, size=a.shape), 0.0, 1.0)
        heavily = np.clip(a + rng.normal(scale=0.3, size=a.shape), 0.0, 1.0)

        assert ssim(a, slightly) > ssim(a, heavily)

    def test_ssim_small_image(self):
        """Test images smaller than the window are rejected"""
        with pytest.raises(LightFieldShapeError):
            ssim(np.zeros((10, 20)), np.zeros((10, 20)))

    def test_error_map(self):
        """Test the error map averages absolute error over channels"""
        a = np.zeros((2, 2, 2))
        b = np.zeros((2, 2, 2))
        b[0, 0] = [0.2, 0.4]

        out = error_map(a, b)

        assert out.shape == (2, 2)
        assert out[0, 0] == pytest.approx(0.3)
        assert out[1, 1] == 0.0


@pytest.mark.unit
class TestViewTables:
    """Test cases for view_table and per_view_error"""

    def test_one_row_per_view(self, random_lf):
        """Test the table covers every view with the expected columns"""
        table = view_table(random_lf, random_lf)

        assert len(table) == 25
        assert list(table.columns) == ["q_u", "q_v", "mean_l1", "psnr", "ssim"]
        assert (table["psnr"] == PSNR_CAP_DB).all()

    def test_exclusion(self, random_lf):
        """Test excluded views are skipped"""
        table = view_table(random_lf, random_lf, exclude=[CENTER, (1, -2)], with_ssim=False)

        assert len(table) == 23
        assert not ((table["q_u"] == 0) & (table["q_v"] == 0)).any()
        assert "ssim" not in table.columns

    def test_everything_excluded(self, constant_lf):
        """Test excluding every view is an error"""
        with pytest.raises(LightFieldValueError):
            view_table(constant_lf, constant_lf, exclude=constant_lf.offsets())

    def test_extent_mismatch(self, random_lf, constant_lf):
        """Test light fields must share extents"""
        with pytest.raises(LightFieldShapeError):
            view_table(random_lf, constant_lf)

    def test_per_view_error_curve(self, rng):
        """Test the curve averages mean l1 over q_u for each q_v"""
        reference = LightField(np.zeros((3, 3, 4, 4, 1)))
        data = np.zeros((3, 3, 4, 4, 1))
        data[:, 2] = 0.3
        data[0, 0] = 0.6
        test = LightField(data)

        curve = per_view_error(test, reference)

        assert list(curve["q_v"]) == [-1, 0, 1]
        assert curve["mean_l1"].tolist() == pytest.approx([0.2, 0.0, 0.3])
        assert curve["views"].tolist() == [3, 3, 3]


@pytest.mark.unit
class TestEvaluateLightField:
    """Test cases for evaluate_light_field"""

    def test_identical(self, random_lf):
        """Test identical light fields give the PSNR sentinel and SSIM 1"""
        report = evaluate_light_field(random_lf, random_lf)

        assert isinstance(report, EvalReport)
        assert report.mean_psnr == PSNR_CAP_DB
        assert report.mean_ssim == pytest.approx(1.0)
        assert report.psnr_cap_db == PSNR_CAP_DB
        assert report.excluded == []
        assert len(report.views) == 25

    def test_excluded_recorded(self, random_lf, rng):
        """Test excluded offsets are listed and left out of the means"""
        noisy = LightField(np.clip(random_lf.data + rng.normal(scale=0.05, size=random_lf.data.shape), 0.0, 1.0))

        report = evaluate_light_field(noisy, random_lf, exclude=[AngularOffset(0, 0)])

        assert report.excluded == ["0,0"]
        assert len(report.views) == 24
        assert report.mean_psnr == pytest.approx(np.mean([v.psnr for v in report.views]))
        assert report.mean_psnr < PSNR_CAP_DB

    def test_matches_library_metrics(self, random_lf, rng):
        """Test per-view numbers equal direct psnr/ssim calls"""
        noisy = LightField(np.clip(random_lf.data + rng.normal(scale=0.1, size=random_lf.data.shape), 0.0, 1.0))

        report = evaluate_light_field(noisy, random_lf)

        first = report.views[0]
        i, j = random_lf.index_of((first.q_u, first.q_v))
        assert first.psnr == pytest.approx(psnr(noisy.data[i, j], random_lf.data[i, j]))
        assert first.ssim == pytest.approx(ssim(noisy.data[i, j], random_lf.data[i, j]))


@pytest.mark.unit
class TestDisparityMetrics:
    """Test cases for disparity accuracy helpers"""

    def test_textured_mask(self):
        """Test flat regions are untextured and steep ramps textured"""
        flat = np.full((8, 8), 0.5)
        ramp = np.tile(0.1 * np.arange(8.0), (8, 1))

        assert not textured_mask(flat).any()
        assert textured_mask(ramp).all()

    def test_disparity_mae_with_mask(self):
        """Test the masked mean only counts selected pixels"""
        truth = np.zeros((3, 3, 2, 2))
        estimate = np.zeros((3, 3, 2, 2))
        estimate[..., 0, 0] = 1.0
        mask = np.array([[True, False], [False, False]])

        assert disparity_mae(estimate, truth) == pytest.approx(0.25)
        assert disparity_mae(estimate, truth, mask) == pytest.approx(1.0)
        with pytest.raises(LightFieldValueError):
            disparity_mae(estimate, truth, np.zeros((2, 2), dtype=bool))

    def test_sign_agreement(self):
        """Test the fraction of matching signs"""
        truth = np.array([1.0, -1.0, 2.0, -2.0])
        estimate = np.array([0.5, 0.5, 1.0, -3.0])

        assert sign_agreement(estimate, truth) == pytest.approx(0.75)
