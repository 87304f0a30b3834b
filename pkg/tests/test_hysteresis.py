import numpy as np
import pytest

from edgeforge import (
    EdgeMap,
    ThinnedField,
    Thresholds,
    WorkerConfig,
    double_threshold,
    trace_edges,
    trace_edges_parallel,
)

from oracles import trace_ref


def thin_from(mag):
    mag = np.asarray(mag, dtype=np.float64)
    return ThinnedField(width=mag.shape[1], height=mag.shape[0], magnitude=mag)


def map_from(labels):
    labels = np.asarray(labels, dtype=np.uint8)
    return EdgeMap(width=labels.shape[1], height=labels.shape[0], labels=labels)


class TestThresholds:
    def test_rejects_inverted(self):
        with pytest.raises(ValueError):
            Thresholds(low=5.0, high=2.0)
        with pytest.raises(ValueError):
            Thresholds(low=-1.0, high=2.0)


class TestDoubleThreshold:
    def test_three_way_split(self):
        em = double_threshold(thin_from([[0.0, 3.0, 6.0]]), Thresholds(low=2.0, high=5.0))
        assert em.labels.tolist() == [[0, 1, 2]]

    def test_degenerate_zero_thresholds_make_everything_strong(self):
        em = double_threshold(thin_from([[0.0, 7.0]]), Thresholds(low=0.0, high=0.0))
        assert em.labels.tolist() == [[2, 2]]

    def test_boundary_value_is_strong(self):
        em = double_threshold(thin_from([[5.0]]), Thresholds(low=2.0, high=5.0))
        assert em.labels.tolist() == [[2]]


class TestTraceEdges:
    def test_no_strong_seeds_means_no_edges(self):
        em = trace_edges(map_from([[1, 1, 0, 1]]))
        assert not em.final.any()

    def test_weak_chain_connected_to_strong(self):
        em = trace_edges(map_from([[2, 1, 1, 0, 1]]))
        assert em.final.tolist() == [[True, True, True, False, False]]

    def test_diagonal_chain_is_eight_connected(self):
        labels = np.zeros((5, 5), dtype=np.uint8)
        labels[2, 2] = 2
        for i in range(3):
            labels[i, i] = max(labels[i, i], 1)  # diagonal weak run to the corner
        em = trace_edges(map_from(labels))
        assert em.final[0, 0] and em.final[1, 1] and em.final[2, 2]

    @pytest.mark.parametrize("seed", range(20))
    def test_matches_bfs_oracle(self, seed):
        rng = np.random.default_rng(seed)
        labels = rng.choice([0, 1, 2], size=(12, 12), p=[0.5, 0.35, 0.15])
        em = trace_edges(map_from(labels))
        assert em.final.tolist() == trace_ref(labels.tolist())

    def test_every_final_weak_pixel_reaches_strong(self):
        rng = np.random.default_rng(123)
        labels = rng.choice([0, 1, 2], size=(16, 16), p=[0.6, 0.35, 0.05])
        em = trace_edges(map_from(labels))
        oracle = np.array(trace_ref(labels.tolist()))
        assert np.array_equal(em.final, oracle)
        # strong pixels always final, final implies labeled
        assert np.all(em.final[labels == 2])
        assert not np.any(em.final & (labels == 0))


class TestTraceEdgesParallel:
    def test_single_worker_equals_serial(self):
        rng = np.random.default_rng(1)
        labels = rng.choice([0, 1, 2], size=(10, 10))
        serial = trace_edges(map_from(labels))
        par = trace_edges_parallel(map_from(labels), WorkerConfig(workers=1, band_granularity=1))
        assert np.array_equal(par.final, serial.final)

    @pytest.mark.parametrize("workers", [2, 4, 8])
    def test_random_maps_match_serial(self, workers):
        rng = np.random.default_rng(workers)
        cfg = WorkerConfig(workers=workers, band_granularity=1)
        for _ in range(100):
            labels = rng.choice([0, 1, 2], size=(16, 16), p=[0.55, 0.35, 0.1])
            serial = trace_edges(map_from(labels))
            par = trace_edges_parallel(map_from(labels), cfg)
            assert np.array_equal(par.final, serial.final)

    def test_snake_crossing_every_band_boundary(self):
        # a single weak path zig-zagging through all rows, one strong seed at the end
        h, w = 16, 8
        labels = np.zeros((h, w), dtype=np.uint8)
        for y in range(h):
            if y % 2 == 0:
                labels[y, :] = 1
            else:
                labels[y, 0 if (y // 2) % 2 else w - 1] = 1
        labels[h - 1, 0] = 2
        serial = trace_edges(map_from(labels))
        assert serial.final.sum() == (labels != 0).sum()  # fully connected snake
        for workers in (2, 4, 8):
            par = trace_edges_parallel(
                map_from(labels), WorkerConfig(workers=workers, band_granularity=1)
            )
            assert np.array_equal(par.final, serial.final)


class TestThresholdMonotonicity:
    def test_lower_low_never_removes_and_higher_high_never_adds(self):
        rng = np.random.default_rng(77)
        for _ in range(30):
            mag = rng.random((12, 12)) * 10
            thin = thin_from(mag)
            base = trace_edges(double_threshold(thin, Thresholds(low=2.0, high=6.0))).final
            looser = trace_edges(double_threshold(thin, Thresholds(low=1.0, high=6.0))).final
            stricter = trace_edges(double_threshold(thin, Thresholds(low=2.0, high=8.0))).final
            assert np.all(looser | ~base)  # base subset of looser
            assert np.all(base | ~stricter)  # stricter subset of base
