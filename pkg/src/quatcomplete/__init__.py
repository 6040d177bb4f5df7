"""Quaternion tensor completion for color video inpainting.

Color video frames are encoded as pure quaternion matrices; all algebra runs
on a real block embedding of the quaternions and the missing entries are
recovered by proximal alternating minimization of a nonlinear-transform
nuclear norm objective.
"""

from .completion import QuaternionTensorCompleter, as_qtensor, tensor_to_array
from .errors import DataError, DivergenceError
from .frames import FrameSequence, load_frames, save_frames
from .metrics import psnr, rse, ssim
from .qtensor import (
    QTensor3,
    RealTensor3,
    embed_mask,
    embed_tensor,
    mode3_fold,
    mode3_product,
    mode3_unfold,
    project_mask,
    unembed_tensor,
)
from .quaternion import (
    QMatrix,
    Quaternion,
    StructureViolation,
    embed_col,
    embed_full,
    hamilton_product,
    qmat_multiply,
    unembed_full,
)
from .sampling import SplitMix64, sample_mask, synth_lowrank
from .solver import (
    InfeasibleStateError,
    IterationRecord,
    SolverConfig,
    SolverState,
    init_state,
    interpolate_missing,
    objective,
    run_pam,
    update_T,
    update_X,
    update_Y,
    update_Z,
)
from .spectral import SvdResult, nuclear_norm, q_nuclear_norm, qtsvt_slice, svd, svt
from .transforms import (
    ACTIVATION_NAMES,
    Activation,
    TransformMatrix,
    activation_apply,
    activation_derivative,
    composite_transform,
    get_activation,
    init_transform,
    nonlinear_transform_nuclear_norm,
    procrustes_update,
)

__all__ = [
    "ACTIVATION_NAMES",
    "Activation",
    "DataError",
    "DivergenceError",
    "FrameSequence",
    "InfeasibleStateError",
    "IterationRecord",
    "QMatrix",
    "QTensor3",
    "Quaternion",
    "QuaternionTensorCompleter",
    "RealTensor3",
    "SolverConfig",
    "SolverState",
    "SplitMix64",
    "StructureViolation",
    "SvdResult",
    "TransformMatrix",
    "activation_apply",
    "activation_derivative",
    "as_qtensor",
    "composite_transform",
    "embed_col",
    "embed_full",
    "embed_mask",
    "embed_tensor",
    "get_activation",
    "hamilton_product",
    "init_state",
    "init_transform",
    "interpolate_missing",
    "load_frames",
    "mode3_fold",
    "mode3_product",
    "mode3_unfold",
    "nonlinear_transform_nuclear_norm",
    "nuclear_norm",
    "objective",
    "procrustes_update",
    "project_mask",
    "psnr",
    "q_nuclear_norm",
    "qmat_multiply",
    "qtsvt_slice",
    "rse",
    "run_pam",
    "sample_mask",
    "save_frames",
    "ssim",
    "svd",
    "svt",
    "synth_lowrank",
    "tensor_to_array",
    "unembed_full",
    "unembed_tensor",
    "update_T",
    "update_X",
    "update_Y",
    "update_Z",
]

__version__ = "0.1.0"
