"""Empirical Voronoi wavelet transform."""
from .distance import (
    SignedDistanceMap,
    brute_force_signed_distance,
    frequency_signed_distance,
    quasi_euclidean,
    signed_distance,
)
from .errors import DetectionError, EvwError, FrameError, InvalidInputError
from .filterbank import FilterBank, TransitionParams, WaveletFilter, auto_tau, beta, build_bank, build_filter
from .scalespace import (
    MaximaTrack,
    ScaleSpaceParams,
    SeedSet,
    detect_seeds,
    gaussian_smooth,
    local_maxima,
    otsu_threshold,
    track_maxima,
)
from .spectral import forward_dft, inverse_dft, magnitude, mate
from .synth import Mode, Shape, ToySpec, default_toy_spec, make_pure_tone, make_toy_image
from .transform import EvwDecomposition, EvwParams, decompose, decompose_with_bank, reconstruct
from .voronoi import PartitionLabels, cell_boundary, label_grid, pair_symmetric_cells

__version__ = "0.1.0"
