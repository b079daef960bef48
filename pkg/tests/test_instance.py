"""Instance validation, loss models, and serialization."""

import math

import numpy as np
import pytest

from probfeed.core import (
    AdversarialLoss,
    ConstantLoss,
    GaussianLoss,
    InstanceSpec,
    TapeSet,
    instance_spec_from_dict,
    instance_spec_to_dict,
    load_instance_spec,
    make_instance,
    sample_loss,
    sample_losses,
)


def two_arm_spec():
    return InstanceSpec(
        num_arms=2,
        horizon=1000,
        feedback_probs=(0.5, 1.0),
        loss_models=(ConstantLoss(0.9), ConstantLoss(0.1)),
    )


class TestMakeInstance:
    def test_two_arm_gaps(self):
        inst = make_instance(two_arm_spec())
        assert np.allclose(inst.gaps, [0.8, 0.0])
        assert inst.horizon == 1000

    def test_degenerate_single_arm(self):
        spec = InstanceSpec(1, 1, (1.0,), (ConstantLoss(0.0),))
        inst = make_instance(spec)
        assert inst.num_arms == 1
        assert inst.gaps.tolist() == [0.0]

    def test_rejects_bad_probability(self):
        spec = InstanceSpec(1, 10, (1.2,), (ConstantLoss(0.5),))
        with pytest.raises(ValueError):
            make_instance(spec)

    def test_rejects_zero_horizon(self):
        spec = InstanceSpec(1, 0, (0.5,), (ConstantLoss(0.5),))
        with pytest.raises(ValueError):
            make_instance(spec)

    def test_rejects_empty_arms(self):
        spec = InstanceSpec(0, 10, (), ())
        with pytest.raises(ValueError):
            make_instance(spec)

    def test_rejects_tape_length_mismatch(self):
        spec = InstanceSpec(1, 10, (0.5,), (AdversarialLoss(tape=(0.1, 0.2)),))
        with pytest.raises(ValueError):
            make_instance(spec)

    def test_paired_instance_differs_only_in_one_rate(self):
        inst = make_instance(two_arm_spec())
        paired = inst.with_feedback_prob(0, 0.9)
        assert paired.feedback_probs.tolist() == [0.9, 1.0]
        assert paired.spec.loss_models == inst.spec.loss_models


class TestSampleLoss:
    def test_constant(self):
        tapes = TapeSet(0)
        assert sample_loss(ConstantLoss(0.9), 0, 17, tapes, 0) == 0.9

    def test_adversarial_lookup(self):
        tapes = TapeSet(0)
        model = AdversarialLoss(tape=(0.1, 0.7))
        # 0-based round index 1 is the second round.
        assert sample_loss(model, 0, 1, tapes, 0) == 0.7

    def test_gaussian_clips_negative_draws_to_zero(self):
        tapes = TapeSet(3)
        model = GaussianLoss(mean=0.05, stddev=0.1)
        draws = sample_losses(model, 0, np.arange(4000), tapes, 0)
        raw_would_be_negative = draws == 0.0
        assert raw_would_be_negative.any()
        assert draws.min() >= 0.0 and draws.max() <= 1.0

    def test_gaussian_deterministic_given_keys(self):
        tapes = TapeSet(3)
        model = GaussianLoss(mean=0.5, stddev=0.1)
        a = sample_loss(model, 2, 5, tapes, 1)
        b = sample_loss(model, 2, 5, tapes, 1)
        assert a == b
        assert sample_losses(model, 2, np.array([5]), tapes, 1)[0] == a

    def test_gaussian_mean_loss_accounts_for_clipping(self):
        tapes = TapeSet(9)
        model = GaussianLoss(mean=0.05, stddev=0.2)
        n = 200_000
        draws = sample_losses(model, 0, np.arange(n), tapes, 0)
        se = draws.std(ddof=1) / math.sqrt(n)
        assert abs(draws.mean() - model.mean_loss()) <= 3.0 * se
        # Clipping at zero pulls the mean up relative to the raw parameter.
        assert model.mean_loss() > 0.05


class TestSerialization:
    def test_round_trip(self):
        spec = InstanceSpec(
            num_arms=2,
            horizon=4,
            feedback_probs=(0.25, 1.0),
            loss_models=(
                GaussianLoss(mean=0.3, stddev=0.1),
                AdversarialLoss(tape=(0.1, 0.2, 0.3, 0.4)),
            ),
        )
        again = instance_spec_from_dict(instance_spec_to_dict(spec))
        assert again == spec

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "instance.json"
        path.write_text(
            '{"arms": 2, "horizon": 3, "feedback_probs": [0.5, 1.0],'
            ' "loss_models": [{"kind": "constant", "value": 0.9},'
            ' {"kind": "constant", "value": 0.1}], "seed": 7}'
        )
        spec, seed = load_instance_spec(path)
        assert seed == 7
        assert spec.num_arms == 2
        make_instance(spec)
