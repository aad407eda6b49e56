"""Shared constants and factories for the test suite."""
from __future__ import annotations

from fracadrc import AdrcConfig, FracPlant

# Reference operating point used throughout the suite: the plant
# 1/(s^0.8 + 10) under a K=150 outer loop with a 400 rad/s observer,
# sampled at 8 kHz for one second.
REF = {
    "a_o": 10.0,
    "b_o": 1.0,
    "b": 1.0,
    "mu": 0.8,
    "K": 150.0,
    "omega_o": 400.0,
    "Ts": 1.0 / 8000.0,
    "horizon": 1.0,
}


def ref_plant(**overrides) -> FracPlant:
    kw = {"a_o": REF["a_o"], "b_o": REF["b_o"], "mu": REF["mu"], "Ts": REF["Ts"]}
    kw.update(overrides)
    return FracPlant(**kw)


def ref_config(**overrides) -> AdrcConfig:
    kw = {
        "K": REF["K"],
        "omega_o": REF["omega_o"],
        "b": REF["b"],
        "Ts": REF["Ts"],
        "horizon": REF["horizon"],
    }
    kw.update(overrides)
    return AdrcConfig(**kw)
