from .instance import (
    AdversarialLoss,
    ConstantLoss,
    GaussianLoss,
    Instance,
    InstanceSpec,
    LossModel,
    instance_spec_from_dict,
    instance_spec_to_dict,
    load_instance_spec,
    make_instance,
    sample_loss,
    sample_losses,
)
from .tapes import (
    TapeSet,
    draw_feedback,
    geometric_from_uniform,
    geometric_from_uniform_array,
)
from .trace import RunTrace, TraceBuilder

__all__ = [
    "AdversarialLoss",
    "ConstantLoss",
    "GaussianLoss",
    "Instance",
    "InstanceSpec",
    "LossModel",
    "RunTrace",
    "TapeSet",
    "TraceBuilder",
    "draw_feedback",
    "geometric_from_uniform",
    "geometric_from_uniform_array",
    "instance_spec_from_dict",
    "instance_spec_to_dict",
    "load_instance_spec",
    "make_instance",
    "sample_loss",
    "sample_losses",
]
