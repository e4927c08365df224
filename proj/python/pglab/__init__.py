"""Python access to the pglab core: norms, splits and scenario runs."""

from ._pglab import (
    Field,
    InvalidArgument,
    InvariantViolation,
    NumericalAbort,
    besov_norm,
    builtin_scenario_text,
    builtin_scenarios,
    k_bounds,
    load_field,
    lorentz_norm,
    lorentz_norm_series,
    lp_norm,
    run_scenario,
    save_field,
    split_intervals,
)


def run_builtin(builtin, output_root, **overrides):
    """Run a built-in scenario with `key = value` overrides appended."""
    text = builtin_scenario_text(builtin)
    text += "".join(f"{k} = {v}\n" for k, v in overrides.items())
    return run_scenario(text, str(output_root))


__all__ = [
    "Field",
    "InvalidArgument",
    "InvariantViolation",
    "NumericalAbort",
    "besov_norm",
    "builtin_scenario_text",
    "builtin_scenarios",
    "k_bounds",
    "load_field",
    "lorentz_norm",
    "lorentz_norm_series",
    "lp_norm",
    "run_builtin",
    "run_scenario",
    "save_field",
    "split_intervals",
]
