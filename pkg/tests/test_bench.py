import numpy as np
import pytest

from sasatrack import bench
from sasatrack.bench import (
    EvalResult,
    Sequence,
    center_error,
    evaluate,
    iou,
    load_otb_sequence,
    run_ope,
    save_otb_sequence,
    synthetic_sequence,
    write_report,
)
from sasatrack.synth import SynthSpec, generate_synthetic
from sasatrack.tracker import BoundingBox, TrackerConfig


def box(x, y, w, h):
    return BoundingBox.from_tlwh(x, y, w, h)


class TestParsing:
    def test_comma_tab_space(self):
        for line in ("1,2,3,4", "1\t2\t3\t4", "1 2 3 4", "1, 2,\t3, 4"):
            b = bench._parse_box_line(line, 1)
            assert b.to_tlwh() == (1.0, 2.0, 3.0, 4.0)

    def test_center_convention(self):
        b = bench._parse_box_line("231,87,70,110", 1)
        assert (b.cx, b.cy) == (265.5, 141.5)

    def test_errors_carry_line_number(self):
        with pytest.raises(ValueError, match="line 7"):
            bench._parse_box_line("1,2,3", 7)
        with pytest.raises(ValueError, match="line 3"):
            bench._parse_box_line("1,2,x,4", 3)
        with pytest.raises(ValueError, match="line 9"):
            bench._parse_box_line("1,2,0,4", 9)


class TestSequenceIO:
    def test_save_load_round_trip(self, tmp_path):
        frames, boxes = generate_synthetic(SynthSpec(n_frames=5))
        save_otb_sequence(tmp_path / "seq", frames, boxes, {"fast-motion"})
        seq = load_otb_sequence(tmp_path / "seq")
        assert len(seq) == 5
        assert seq.attributes == {"fast-motion"}
        for a, b in zip(seq.groundtruth, boxes):
            assert a == b
        # frames survive the 8-bit round trip
        assert np.abs(seq.frame(0) - frames[0]).max() <= 1.0 / 255.0

    def test_missing_groundtruth(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_otb_sequence(tmp_path)

    def test_count_mismatch(self, tmp_path):
        frames, boxes = generate_synthetic(SynthSpec(n_frames=4))
        save_otb_sequence(tmp_path / "seq", frames, boxes[:3] + [boxes[0]] * 2)
        with pytest.raises(ValueError, match="4 frames"):
            load_otb_sequence(tmp_path / "seq")

    def test_sequence_requires_one_source(self):
        with pytest.raises(ValueError):
            Sequence("x", [box(0, 0, 4, 4)])


class TestMetrics:
    def test_center_error(self):
        assert center_error(box(0, 0, 10, 10), box(3, 4, 10, 10)) == 5.0

    def test_iou_identical(self):
        assert iou(box(5, 5, 10, 20), box(5, 5, 10, 20)) == pytest.approx(1.0)

    def test_iou_disjoint(self):
        assert iou(box(0, 0, 10, 10), box(50, 50, 10, 10)) == 0.0

    def test_iou_half_overlap(self):
        # shift by half the width: overlap 50, union 150
        a, b = box(0, 0, 10, 10), box(5, 0, 10, 10)
        assert iou(a, b) == pytest.approx(1.0 / 3.0)

    def test_auc_on_constant_half_iou(self):
        gt = [box(0, 0, 10, 10)] * 8
        pred = [box(0, 0, 10, 20)] * 8  # inter 100, union 200 -> IoU 0.5
        res = evaluate(pred, gt)
        assert all(iou(p, g) == pytest.approx(0.5) for p, g in zip(pred, gt))
        assert res.auc == pytest.approx(11.0 / 21.0)

    def test_precision_boundary_inclusive(self):
        gt = [box(0, 0, 10, 10)] * 4
        pred = [box(12, 16, 10, 10)] * 4  # center error exactly 20
        res = evaluate(pred, gt)
        assert res.precision_at_20 == 1.0
        assert res.precision[19] == 0.0

    def test_perfect_prediction(self):
        gt = [box(i, i, 12, 12) for i in range(6)]
        res = evaluate(gt, gt)
        assert res.auc == 1.0 and res.precision_at_20 == 1.0

    def test_curve_shapes_and_monotonicity(self):
        rng = np.random.default_rng(40)
        gt = [box(50, 50, 20, 20)] * 30
        pred = [box(50 + rng.normal(0, 8), 50 + rng.normal(0, 8), 20, 20)
                for _ in range(30)]
        res = evaluate(pred, gt)
        assert res.precision.shape == (51,) and res.success.shape == (21,)
        assert np.all(np.diff(res.precision) >= 0)
        assert np.all(np.diff(res.success) <= 0)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            evaluate([box(0, 0, 4, 4)], [box(0, 0, 4, 4)] * 2)


class TestRunOpe:
    def _sequences(self, n=2):
        return [synthetic_sequence(
            f"s{i}", SynthSpec(n_frames=8, velocity=(3.0, 1.0), seed=i),
            attributes={"fast-motion"} if i == 0 else set())
            for i in range(n)]

    def test_oracle_tracker_scores_one(self):
        seqs = self._sequences()
        report = run_ope({"oracle": lambda s: list(s.groundtruth)}, seqs)
        assert report.overall["oracle"].auc == pytest.approx(1.0)
        assert report.overall["oracle"].precision_at_20 == 1.0

    def test_real_tracker_runs(self):
        report = run_ope({"dcf": TrackerConfig()}, self._sequences(1))
        assert report.overall["dcf"].auc > 0.5
        assert not report.failures["dcf"]

    def test_failures_recorded_run_continues(self):
        seqs = self._sequences()

        def flaky(seq):
            if seq.name == "s0":
                raise RuntimeError("boom")
            return list(seq.groundtruth)

        report = run_ope({"flaky": flaky}, seqs)
        assert "s0" in report.failures["flaky"]
        assert "s1" in report.per_sequence["flaky"]

    def test_per_attribute_split(self):
        report = run_ope({"oracle": lambda s: list(s.groundtruth)},
                         self._sequences())
        assert set(report.per_attribute["oracle"]) == {"fast-motion"}

    def test_workers_match_serial(self):
        seqs = self._sequences()
        tr = {"oracle": lambda s: list(s.groundtruth)}
        serial = run_ope(tr, seqs, workers=1)
        parallel = run_ope(tr, seqs, workers=4)
        assert list(serial.per_sequence["oracle"]) == \
            list(parallel.per_sequence["oracle"])
        assert serial.overall["oracle"].auc == parallel.overall["oracle"].auc

    def test_empty_inputs(self):
        with pytest.raises(ValueError):
            run_ope({}, self._sequences())


class TestWriteReport:
    def test_outputs_exist(self, tmp_path):
        seqs = [synthetic_sequence("s0", SynthSpec(n_frames=6))]
        report = run_ope({"dcf": TrackerConfig()}, seqs)
        write_report(report, tmp_path)
        for name in ("summary.csv", "curves.csv", "frames.csv",
                     "precision.svg", "success.svg"):
            assert (tmp_path / name).is_file(), name
        summary = (tmp_path / "summary.csv").read_text()
        assert "dcf" in summary and "overall" in summary
