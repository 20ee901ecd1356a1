"""Spatial entanglement of SPDC photon pairs pumped by twisted Gaussian Schell-model beams."""

from ._core import (
    ClosedFormEigs,
    Error,
    EntanglementReport,
    InfeasibleWaist,
    MixtureModel,
    NormalizedPoint,
    PhaseMatching,
    Setup,
    TgsmParams,
    beta_squared,
    closed_form_eigs,
    coordinate_transform,
    decompose,
    delta_from_beta,
    entanglement_report,
    evaluate_point,
    is_physical,
    local_scale,
    log_negativity,
    max_twist,
    mixture_model,
    params_from_normalized,
    partial_transpose,
    phase_matching_cm,
    pt_spectrum,
    pump_cm,
    pump_oam,
    purity,
    sample_component_means,
    sweep,
    sweep_csv,
    symplectic_form,
    symplectic_spectrum,
    two_photon_cm,
    two_photon_purity,
    verify,
    wavenumber_from_wavelength,
    williamson,
)

__all__ = [name for name in dir() if not name.startswith("_")]
