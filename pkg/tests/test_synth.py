import numpy as np
import pytest

from sasatrack.synth import SynthSpec, generate_synthetic, trajectory


class TestTrajectory:
    def test_static(self):
        spec = SynthSpec(velocity=(0.0, 0.0), n_frames=10)
        assert len(set(trajectory(spec))) == 1

    def test_constant_velocity_arithmetic(self):
        spec = SynthSpec(frame_w=640, velocity=(5.0, 0.0), n_frames=10)
        xs = [p[0] for p in trajectory(spec)]
        assert np.array_equal(np.diff(xs), [5] * 9)

    def test_reflection_keeps_target_inside(self):
        spec = SynthSpec(frame_w=200, frame_h=100, target_w=40, target_h=40,
                         velocity=(17.0, 9.0), n_frames=200)
        for x, y in trajectory(spec):
            assert 0 <= x <= 160 and 0 <= y <= 60

    def test_accelerating_caps_speed(self):
        spec = SynthSpec(frame_w=4000, velocity=(2.0, 0.0), accel=3.0,
                         vmax=20.0, profile="accelerating", n_frames=40)
        steps = np.diff([p[0] for p in trajectory(spec)])
        assert steps.max() <= 21  # cap plus rounding
        assert steps[-1] >= 19

    def test_stop_and_go_pauses(self):
        spec = SynthSpec(frame_w=800, velocity=(6.0, 0.0), go_frames=5,
                         stop_frames=5, profile="stop_and_go", n_frames=20)
        steps = np.diff([p[0] for p in trajectory(spec)])
        assert set(steps) == {0, 6}


class TestGenerate:
    def test_shapes_and_range(self):
        spec = SynthSpec(n_frames=3)
        frames, boxes = generate_synthetic(spec)
        assert len(frames) == len(boxes) == 3
        for f in frames:
            assert f.shape == (240, 320)
            assert f.min() >= 0 and f.max() <= 1

    def test_groundtruth_matches_painted_target(self):
        spec = SynthSpec(n_frames=4, velocity=(7.0, 3.0),
                         background_contrast=0.0, target_contrast=0.9)
        frames, boxes = generate_synthetic(spec)
        for frame, box in zip(frames, boxes):
            x, y, w, h = (int(v) for v in box.to_tlwh())
            inside = frame[y:y + h, x:x + w]
            # target texture spans a wide range, flat background does not
            assert inside.std() > frame[0:20, 0:20].std() + 0.05

    def test_same_seed_bit_identical(self):
        spec = SynthSpec(n_frames=5, seed=42)
        a, _ = generate_synthetic(spec)
        b, _ = generate_synthetic(spec)
        assert all(np.array_equal(x, y) for x, y in zip(a, b))

    def test_different_seed_differs(self):
        a, _ = generate_synthetic(SynthSpec(n_frames=1, seed=0))
        b, _ = generate_synthetic(SynthSpec(n_frames=1, seed=1))
        assert not np.array_equal(a[0], b[0])

    def test_blur_keeps_groundtruth(self):
        sharp = SynthSpec(n_frames=6, velocity=(8.0, 0.0), blur=False)
        blurred = SynthSpec(n_frames=6, velocity=(8.0, 0.0), blur=True)
        _, boxes_a = generate_synthetic(sharp)
        _, boxes_b = generate_synthetic(blurred)
        assert boxes_a == boxes_b

    def test_validation(self):
        with pytest.raises(ValueError):
            generate_synthetic(SynthSpec(profile="teleport"))
        with pytest.raises(ValueError):
            generate_synthetic(SynthSpec(target_w=400))
        with pytest.raises(ValueError):
            generate_synthetic(SynthSpec(n_frames=0))
