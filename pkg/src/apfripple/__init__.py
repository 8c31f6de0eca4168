"""Linear stability of ion-irradiated amorphous films under anisotropic plastic flow."""
from .dispersion import (
    ComplexGrowthRate,
    ModeSelection,
    Wavevector,
    angle_sweep,
    most_unstable_mode,
    phase_velocity,
    sigma_full,
    sigma_longwave,
    unstable_band,
    wavelength_longwave,
)
from .model import (
    BeamParameters,
    FilmParameters,
    apf_tensor,
    infer_eta_fA_from_stress,
    rotation_y,
    steady_state,
    stress_magnitude_at_normal,
    surface_tension_number,
)

__version__ = "0.1.0"
