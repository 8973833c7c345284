"""Python bindings for the fedhide federated prototype learning simulator."""

from ._fedhide import (
    ConfigError,
    DegenerateVector,
    Error,
    InvalidArgument,
    NoMetricsFound,
    NonPositiveDenominator,
    cli,
    equal_error_rate,
    fedcs_proxy,
    fedgn_proxy,
    fedhide_proxy,
    normalize,
    parse_grid,
    prototype_leakage,
    proxy_similarity_stats,
    report,
    run_config,
    sample_unit_sphere,
    theorem1_decrease_bound,
    theorem2_rounds,
)

__all__ = [
    "ConfigError",
    "DegenerateVector",
    "Error",
    "InvalidArgument",
    "NoMetricsFound",
    "NonPositiveDenominator",
    "cli",
    "equal_error_rate",
    "fedcs_proxy",
    "fedgn_proxy",
    "fedhide_proxy",
    "normalize",
    "parse_grid",
    "prototype_leakage",
    "proxy_similarity_stats",
    "report",
    "run_config",
    "sample_unit_sphere",
    "theorem1_decrease_bound",
    "theorem2_rounds",
]
