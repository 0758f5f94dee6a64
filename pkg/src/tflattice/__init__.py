"""tflattice: time-frequency analysis on finite periodic lattices.

Core objects: :class:`Grid` / :class:`LatticeSignal` (periodic sample grids),
:class:`ExtendedExponent` (exact reciprocal arithmetic), transforms and Gabor
frames, the space quasi-norms, multilinear phase-space distributions with
their quantization, sparse sequence operators, exact boundedness-region
verdicts, and scaling experiments tying the two together.
"""

from .exponents import (INF, TWO, ExponentTuple, ExtendedExponent, conjugate,
                        join2, meet2)
from .lattice import (Grid, LatticeSignal, bump_signal, constant_signal,
                      default_window, delta_signal, random_signal,
                      reference_window, zero_signal)
from .norms import (PartitionOfUnity, fourier_modulation_norm, make_partition,
                    mixed_norm, modulation_norm, wiener_amalgam_norm)
from .regions import (RegionKind, Verdict, bessel_bpwm_verdict, bpwf_verdict,
                      bpwm_verdict, brwf_verdict, brwm_verdict,
                      conv_sharp_verdict, dual_exponents, lambda_set,
                      local_brwm_verdict, star_conv_verdict, tau_embed_verdict)
from .rihaczek import (PhaseSpaceSignal, boundedness_ratio, duality_residual,
                       kohn_nirenberg_apply, phase_space_modulation_norm,
                       phase_space_stft, rihaczek, rihaczek_identity_residual,
                       rihaczek_stft_closed_form)
from .sequences import (TruncatedSequence, conv_star_2, s_p_omega,
                        star_convolve, t_p_omega, tau_m)
from .transforms import (GaborSystem, canonical_dual_window, dft, dft_direct,
                         gabor_analysis, gabor_synthesis, modulate, stft,
                         stft_support_box, stft_to_csv, translate,
                         walnut_frame_bounds)
from .weights import (MixedNormSpec, SeparableWeight, moderate_condition_probe,
                      weight_eval)

__version__ = "0.1.0"

__all__ = [
    "ExponentTuple", "ExtendedExponent", "INF", "TWO", "conjugate", "join2",
    "meet2", "Grid", "LatticeSignal", "bump_signal", "constant_signal",
    "default_window", "delta_signal", "random_signal", "reference_window",
    "zero_signal",
    "PartitionOfUnity", "fourier_modulation_norm", "make_partition",
    "mixed_norm", "modulation_norm", "wiener_amalgam_norm", "RegionKind",
    "Verdict", "bessel_bpwm_verdict", "bpwf_verdict", "bpwm_verdict",
    "brwf_verdict", "brwm_verdict", "conv_sharp_verdict", "dual_exponents",
    "lambda_set", "local_brwm_verdict", "star_conv_verdict",
    "tau_embed_verdict", "PhaseSpaceSignal", "boundedness_ratio",
    "duality_residual", "kohn_nirenberg_apply", "phase_space_modulation_norm",
    "phase_space_stft", "rihaczek", "rihaczek_identity_residual",
    "rihaczek_stft_closed_form", "TruncatedSequence", "conv_star_2",
    "s_p_omega", "star_convolve", "t_p_omega", "tau_m", "GaborSystem",
    "canonical_dual_window", "dft", "dft_direct", "gabor_analysis",
    "gabor_synthesis", "modulate", "stft", "stft_support_box", "stft_to_csv",
    "translate", "walnut_frame_bounds", "MixedNormSpec", "SeparableWeight",
    "moderate_condition_probe", "weight_eval",
]
