"""
Unit tests for the light-field container, EPI slicing, shearing and bilinear sampling
"""

import pytest
import numpy as np

from lf_core.errors import AngularIndexError, LightFieldShapeError, LightFieldValueError
from lf_core.light_field import CENTER, AngularOffset, LightField, extract_epi, get_view, shear
from lf_core.sampling import pixel_grid, sample_bilinear, sample_bilinear_with_grad, scatter_bilinear


@pytest.mark.unit
class TestLightField:
    """Test cases for LightField"""

    def test_grayscale_gets_channel_axis(self):
        """Test that (A_u, A_v, H, W) input becomes single-channel"""
        lf = LightField(np.zeros((3, 5, 4, 6)))

        assert lf.data.shape == (3, 5, 4, 6, 1)
        assert lf.angular_shape == (3, 5)
        assert lf.spatial_shape == (4, 6)
        assert lf.channels == 1
        assert lf.radius == (1, 2)

    def test_data_is_read_only(self, random_lf):
        """Test that the stored array cannot be written"""
        with pytest.raises(ValueError):
            random_lf.data[0, 0, 0, 0, 0] = 0.5

    def test_rejects_even_angular_extent(self):
        """Test that even angular extents are rejected"""
        with pytest.raises(LightFieldShapeError):
            LightField(np.zeros((4, 5, 8, 8, 1)))

    def test_rejects_tiny_spatial_extent(self):
        """Test that spatial extents below 2 are rejected"""
        with pytest.raises(LightFieldShapeError):
            LightField(np.zeros((3, 3, 1, 8, 1)))

    def test_rejects_out_of_range_values(self):
        """Test range validation"""
        data = np.zeros((3, 3, 4, 4, 1))
        data[1, 1, 0, 0, 0] = 1.5
        with pytest.raises(LightFieldValueError):
            LightField(data)

    def test_rejects_nan(self):
        """Test that non-finite values are rejected"""
        data = np.zeros((3, 3, 4, 4, 1))
        data[0, 0, 0, 0, 0] = np.nan
        with pytest.raises(LightFieldValueError):
            LightField(data)

    def test_center_view_is_middle_index(self, random_lf):
        """Test offset (0, 0) maps to storage index ((A_u-1)/2, (A_v-1)/2)"""
        assert random_lf.index_of(CENTER) == (2, 2)
        np.testing.assert_array_equal(get_view(random_lf, (0, 0)), random_lf.data[2, 2])

    def test_offsets_in_storage_order(self):
        """Test offsets run row-major from (-r_u, -r_v)"""
        lf = LightField(np.zeros((3, 3, 4, 4, 1)))

        offsets = lf.offsets()

        assert offsets[0] == AngularOffset(-1, -1)
        assert offsets[4] == CENTER
        assert offsets[-1] == AngularOffset(1, 1)

    def test_get_view_out_of_range(self, random_lf):
        """Test that offsets outside the grid raise AngularIndexError"""
        with pytest.raises(AngularIndexError):
            get_view(random_lf, (3, 0))

    def test_angular_offset_parse(self):
        """Test parsing 'q_u,q_v' strings"""
        assert AngularOffset.parse(" -1, 2") == AngularOffset(-1, 2)
        assert str(AngularOffset(0, -3)) == "0,-3"
        with pytest.raises(ValueError):
            AngularOffset.parse("1")


@pytest.mark.unit
class TestEpi:
    """Test cases for extract_epi"""

    def test_constant_lf_gives_constant_epi(self, constant_lf):
        """Test EPI of a constant light field is constant"""
        epi = extract_epi(constant_lf, "x", 5, 0)

        assert epi.data.shape == (3, 12, 1)
        np.testing.assert_allclose(epi.data, 0.4)

    def test_x_epi_rows_follow_v(self, random_lf):
        """Test axis 'x' fixes (y, q_u) and runs rows over q_v"""
        epi = extract_epi(random_lf, "x", 3, -1)

        i, _ = random_lf.index_of((-1, 0))
        np.testing.assert_array_equal(epi.data, random_lf.data[i, :, 3, :, :])
        assert epi.angular_offsets == (-2, -1, 0, 1, 2)

    def test_y_epi_rows_follow_u(self, random_lf):
        """Test axis 'y' fixes (x, q_v) and runs rows over q_u"""
        epi = extract_epi(random_lf, "y", 7, 2)

        _, j = random_lf.index_of((0, 2))
        np.testing.assert_array_equal(epi.data, random_lf.data[:, j, :, 7, :])

    def test_fixed_index_out_of_range(self, random_lf):
        """Test spatial and angular bounds are checked"""
        with pytest.raises(AngularIndexError):
            extract_epi(random_lf, "x", 16, 0)
        with pytest.raises(AngularIndexError):
            extract_epi(random_lf, "x", 0, 5)

    def test_unknown_axis(self, random_lf):
        """Test unsupported axis names are rejected"""
        with pytest.raises(ValueError):
            extract_epi(random_lf, "z", 0, 0)


@pytest.mark.unit
class TestShear:
    """Test cases for shear"""

    def test_zero_shear_is_identity(self, random_lf):
        """Test shear by 0 returns identical data"""
        np.testing.assert_array_equal(shear(random_lf, 0.0).data, random_lf.data)

    def test_center_view_unchanged(self, random_lf):
        """Test the centerview is never moved"""
        sheared = shear(random_lf, 0.7)

        np.testing.assert_allclose(get_view(sheared, CENTER), get_view(random_lf, CENTER))

    def test_integer_shear_moves_views(self, random_lf):
        """Test L'(x, v) = L(x + s * v, v) away from the borders"""
        sheared = shear(random_lf, 1.0)

        view = get_view(random_lf, (1, 0))
        moved = get_view(sheared, (1, 0))
        np.testing.assert_allclose(moved[:-1], view[1:])

    def test_non_finite_shear(self, random_lf):
        """Test non-finite shear amounts are rejected"""
        with pytest.raises(LightFieldValueError):
            shear(random_lf, float("inf"))


@pytest.mark.unit
class TestBilinearSampling:
    """Test cases for the bilinear sampler and its adjoint"""

    def test_integer_coordinates_reproduce_source(self, rng):
        """Test sampling on the pixel grid returns the source"""
        source = rng.uniform(size=(2, 6, 7))
        ys, xs = pixel_grid(6, 7)

        out = sample_bilinear(source, np.stack([ys, ys]), np.stack([xs, xs]))

        np.testing.assert_allclose(out, source)

    def test_midpoint_is_average(self):
        """Test half-pixel samples average their neighbours"""
        source = np.array([[[0.0, 1.0], [2.0, 3.0]]])

        out = sample_bilinear(source, np.array([[0.5]]), np.array([[0.5]]))

        assert out[0, 0] == pytest.approx(1.5)

    def test_clamp_to_edge(self):
        """Test coordinates outside the image are clamped"""
        source = np.array([[[0.0, 1.0], [2.0, 3.0]]])

        out = sample_bilinear(source, np.array([[-4.0]]), np.array([[9.0]]))

        assert out[0, 0] == pytest.approx(1.0)

    def test_derivative_zero_when_clamped(self):
        """Test derivatives vanish in the clamped region"""
        source = np.array([[[0.0, 1.0], [2.0, 3.0]]])

        _, d_y, d_x = sample_bilinear_with_grad(source, np.array([[-1.0]]), np.array([[0.5]]))

        assert d_y[0, 0] == 0.0
        assert d_x[0, 0] == pytest.approx(1.0)

    def test_derivative_of_linear_ramp(self):
        """Test derivatives of a linear image equal its slopes"""
        ys, xs = pixel_grid(5, 5)
        source = (2.0 * ys + 3.0 * xs)[np.newaxis]

        _, d_y, d_x = sample_bilinear_with_grad(source, np.array([[1.3]]), np.array([[2.6]]))

        assert d_y[0, 0] == pytest.approx(2.0)
        assert d_x[0, 0] == pytest.approx(3.0)

    def test_scatter_is_adjoint_of_sample(self, rng):
        """Test <sample(f), g> == <f, scatter(g)>"""
        source = rng.uniform(size=(1, 8, 9, 2))
        ys = rng.uniform(-1.0, 9.0, size=(1, 5, 4))
        xs = rng.uniform(-1.0, 10.0, size=(1, 5, 4))
        upstream = rng.normal(size=(1, 5, 4, 2))

        lhs = np.sum(sample_bilinear(source, ys, xs) * upstream)
        rhs = np.sum(source * scatter_bilinear(upstream, ys, xs, source.shape))

        assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_rejects_mismatched_coordinates(self):
        """Test coordinate shapes must agree with each other and the stack"""
        with pytest.raises(LightFieldShapeError):
            sample_bilinear(np.zeros((2, 4, 4)), np.zeros((1, 3)), np.zeros((1, 3)))
