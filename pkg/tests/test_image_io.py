import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgeforge import GrayImage, PgmFormatError, load_pgm, sample_pixel_clamped, save_pgm


class TestLoadPgm:
    def test_binary_p5(self):
        data = b"P5\n3 2\n255\n" + bytes([0, 128, 255, 10, 20, 30])
        img = load_pgm(data)
        assert (img.width, img.height) == (3, 2)
        assert img.pixels[0].tolist() == [0.0, 128.0, 255.0]
        assert img.pixels[1].tolist() == [10.0, 20.0, 30.0]

    def test_ascii_p2(self):
        img = load_pgm(b"P2\n1 1\n255\n42\n")
        assert img.pixels[0, 0] == 42.0

    def test_header_comments(self):
        img = load_pgm(b"P5\n# a comment\n2 1\n# another\n255\n\x07\x09")
        assert img.pixels[0].tolist() == [7.0, 9.0]

    def test_truncated_payload(self):
        with pytest.raises(PgmFormatError, match="truncated"):
            load_pgm(b"P5\n2 2\n255\n" + bytes([1, 2, 3]))

    def test_truncated_ascii_payload(self):
        with pytest.raises(PgmFormatError, match="truncated"):
            load_pgm(b"P2\n2 2\n255\n1 2 3")

    def test_bad_magic_reports_offset(self):
        with pytest.raises(PgmFormatError, match="magic") as err:
            load_pgm(b"P6\n1 1\n255\n\x00")
        assert err.value.offset == 0

    def test_maxval_too_large(self):
        with pytest.raises(PgmFormatError, match="maxval"):
            load_pgm(b"P5\n1 1\n65535\n\x00\x00")

    def test_non_numeric_header_token(self):
        with pytest.raises(PgmFormatError, match="non-numeric"):
            load_pgm(b"P5\nab 1\n255\n\x00")


class TestSavePgm:
    def test_single_zero_pixel(self):
        img = GrayImage.from_array(np.array([[0.0]]))
        assert save_pgm(img) == b"P5\n1 1\n255\n\x00"

    def test_rounds_half_away_from_zero(self):
        assert save_pgm(GrayImage.from_array(np.array([[254.6]])))[-1] == 255
        assert save_pgm(GrayImage.from_array(np.array([[0.5]])))[-1] == 1
        assert save_pgm(GrayImage.from_array(np.array([[-0.4]])))[-1] == 0

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            save_pgm(GrayImage.from_array(np.array([[255.5]])))
        with pytest.raises(ValueError):
            save_pgm(GrayImage.from_array(np.array([[-0.6]])))

    def test_round_trip_is_identity_on_loaded_p5(self):
        data = b"P5\n4 3\n255\n" + bytes(range(12))
        assert save_pgm(load_pgm(data)) == data

    @settings(max_examples=50, deadline=None)
    @given(
        st.integers(1, 8),
        st.integers(1, 8),
        st.integers(0, 2**32 - 1),
    )
    def test_round_trip_random_integer_images(self, w, h, seed):
        rng = np.random.default_rng(seed)
        img = GrayImage.from_array(rng.integers(0, 256, size=(h, w)).astype(float))
        again = load_pgm(save_pgm(img))
        assert np.array_equal(again.pixels, img.pixels)


class TestGrayImage:
    def test_rejects_bad_shapes(self):
        with pytest.raises(ValueError):
            GrayImage(width=2, height=2, pixels=np.zeros(3))
        with pytest.raises(ValueError):
            GrayImage(width=0, height=1, pixels=np.zeros(0))

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            GrayImage.from_array(np.array([[np.nan]]))

    def test_pixels_are_immutable(self):
        img = GrayImage.from_array(np.zeros((2, 2)))
        with pytest.raises(ValueError):
            img.pixels[0, 0] = 1.0


class TestSamplePixelClamped:
    @pytest.fixture
    def img(self):
        return GrayImage.from_array(np.arange(9, dtype=float).reshape(3, 3))

    def test_clamps_negative(self, img):
        assert sample_pixel_clamped(img, -1, 0) == img.pixels[0, 0]

    def test_clamps_past_edge(self, img):
        assert sample_pixel_clamped(img, 5, 5) == img.pixels[2, 2]

    def test_matches_direct_indexing_in_range(self, img):
        for y in range(3):
            for x in range(3):
                assert sample_pixel_clamped(img, x, y) == img.pixels[y, x]
