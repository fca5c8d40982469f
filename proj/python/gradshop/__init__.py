"""Surface reconstruction from gradient fields with patch dictionaries."""

from ._core import (
    DlsConfig,
    DlsResult,
    add_noise_snr,
    apply_diff,
    apply_diff_adjoint,
    dct_dictionary,
    dls_reconstruct,
    estimate_normals,
    integrate_dct,
    make_surface,
    normals_to_gradients,
    render_lambertian,
    rmse_aligned,
    ssim,
)

__all__ = [
    "DlsConfig",
    "DlsResult",
    "add_noise_snr",
    "apply_diff",
    "apply_diff_adjoint",
    "dct_dictionary",
    "dls_reconstruct",
    "estimate_normals",
    "integrate_dct",
    "make_surface",
    "normals_to_gradients",
    "render_lambertian",
    "rmse_aligned",
    "ssim",
]
