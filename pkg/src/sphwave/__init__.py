"""Continuous wavelet analysis on the n-sphere S^n.

Spectral (Gegenbauer) representation throughout: kernels and wavelets are
families of zonal or harmonic coefficient sequences indexed by a scale rho.
"""
from .bilinear import (
    ScalingFunction,
    WaveletFamily,
    abel_poisson_wavelet,
    bilinear_synthesize,
    bilinear_transform,
    check_bilinear_admissibility,
    gauss_weierstrass_wavelet,
    isometry_check,
    wavelet_from_kernel,
)
from .euclid import euclid_study, euclidean_probe, hankel_oracle
from .kernels import KernelFamily, abel_poisson_family, check_approximate_identity, gauss_weierstrass_family
from .linear import (
    LinearWaveletFamily,
    check_linear_admissibility,
    linear_reconstruct,
    linear_transform,
    mexican_needlet_family,
    poisson_multipole_family,
)
from .scales import ScaleGrid
from .specfun import SphereDim
from .zonal import HarmonicSpectrum, ZonalSpectrum, convolve

__version__ = "0.1.0"
