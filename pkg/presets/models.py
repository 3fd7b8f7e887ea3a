"""
Model Presets - Named compound-Poisson model configurations.

Each entry is a model config document in the MODEL_SCHEMA format and can be
selected on the command line with `--preset <name>`.
"""

M1 = {
    "drift": 2.0,
    "rate": 1.0,
    "jump": {"family": "exponential", "params": {"rate": 1.0}, "sign": "down"},
    "horizon": {"type": "truncated", "b": 30.0},
}

M1_FINITE = {**M1, "horizon": {"type": "finite", "T": 10.0}}

# Two-sided jumps: up Exp(0.5) w.p. 1/2, down Exp(2) w.p. 1/2
M2 = {
    "drift": 1.0,
    "rate": 2.0,
    "jump": {
        "family": "two_sided_exponential",
        "params": {"p_up": 0.5, "rate_up": 0.5, "rate_down": 2.0},
        "sign": "two-sided",
    },
    "horizon": {"type": "finite", "T": 10.0},
}

M3 = {
    "drift": 1.5,
    "rate": 1.0,
    "jump": {"family": "uniform", "params": {"low": 0.5, "high": 1.5}, "sign": "down"},
    "horizon": {"type": "truncated", "b": 30.0},
}

M4 = {
    "drift": 2.0,
    "rate": 1.0,
    "jump": {"family": "deterministic", "params": {"size": 1.0}, "sign": "down"},
    "horizon": {"type": "truncated", "b": 30.0},
}

MODEL_PRESETS = {
    "M1": M1,
    "M1-finite": M1_FINITE,
    "M2": M2,
    "M3": M3,
    "M4": M4,
}
