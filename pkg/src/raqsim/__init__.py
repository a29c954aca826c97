"""Link-level simulator for an atomic-vapor quantum receiver array uplink.

The package models the optical front end of a vapor-cell RF receiver array
(susceptibility, readout gain, projection-noise floor), generates multi-user
fading channels, simulates ergodic achievable rates under maximum-ratio and
zero-forcing combining, evaluates the matching closed-form lower bounds and
comparison formulas against a conventional antenna array, and reproduces the
headline sweep figures as CSV plus SVG.
"""

from .atomic import (
    FourLevelSystem,
    ProbeField,
    ProbeTransfer,
    RationalSusceptibility,
    probe_transfer,
    steady_state,
    susceptibility,
    susceptibility_numeric,
    susceptibility_rational,
    susceptibility_slope,
)
from .channel import (
    ChannelRealization,
    LargeScaleProfile,
    UserGeometry,
    channel_realization,
    large_scale_profile,
    uniform_profile,
)
from .config import Config, default_config_dict, load_config, parse_config, write_template
from .errors import (
    CombinerError,
    ConfigError,
    DomainError,
    GeometryError,
    RaqsimError,
    SlopeConvergenceError,
    SteadyStateError,
    WeakProbeWarning,
)
from .frontend import (
    FrontEndResponse,
    LocalOscillator,
    MmimoFrontEnd,
    PhotodetectionChain,
    assemble_frontend,
    atom_count,
    dispersion_coefficients,
    element_response,
    mmimo_frontend,
    sql_field_density,
    sql_noise_power,
    steering_matrix,
)
from .linksim import (
    DetectionResult,
    LinkScenario,
    RateReport,
    combiner,
    ergodic_rates_mc,
    mmimo_scenario,
    raq_scenario,
    sinr_per_user,
    synthesize_and_detect,
)
from .rates import (
    BoundInputs,
    GapReport,
    asymptotic_limits,
    gap_raq_vs_mmimo,
    gap_zf_vs_mrc,
    lower_bound,
    lower_bound_per_user,
)
from .sweep import (
    SweepRow,
    SweepSpec,
    dump_channel_csv,
    emit_outputs,
    preset_spec,
    run_sweep,
)

__version__ = "0.1.0"
