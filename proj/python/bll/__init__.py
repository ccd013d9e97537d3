"""Pseudo-spectral solver for the hyperbolic-parabolic balance laws."""

from ._bll import (  # noqa: F401
    ChecksumMismatch,
    CurlNotZero,
    DomainTooSmall,
    Error,
    Grid,
    ModelParams,
    NonzeroMean,
    OverflowGuard,
    ParseError,
    PositivityViolation,
    Scheme,
    SolverError,
    State,
    StepperConfig,
    ValidationError,
    VersionMismatch,
    appendix_scaling_experiment,
    cfl_dt,
    curl_norm,
    diffusion_limit_sweep,
    init_appendix_2d,
    init_appendix_3d,
    init_manufactured,
    initial_state_from_config,
    load_config_json,
    make_grid,
    mms_order_experiment,
    norm_report,
    run,
    run_cli,
    step,
    verify_suite,
)

__version__ = "0.1.0"
