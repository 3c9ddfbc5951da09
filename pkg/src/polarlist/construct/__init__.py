"""Code construction: reliabilities, code layouts and the code families."""
from .codespec import DYNAMIC, FROZEN, INFO, KIND_NAMES, CodeSpec, assemble
from .families import (
    LWB_128_64_PRESET,
    PRESETS,
    crc_polar,
    design,
    ebch_constraints,
    ebch_polar,
    estimate_sc_fer,
    low_weight_bits,
    lwb,
    lwb_preset,
    rm_polar,
    select_frozen,
)
from .ga import Reliabilities, ga_reliabilities
from .jfunc import J, J_inv

__all__ = [
    "CodeSpec", "assemble", "INFO", "FROZEN", "DYNAMIC", "KIND_NAMES",
    "Reliabilities", "ga_reliabilities", "J", "J_inv", "design",
    "select_frozen", "rm_polar", "crc_polar", "ebch_polar", "ebch_constraints",
    "lwb", "lwb_preset", "low_weight_bits", "PRESETS", "LWB_128_64_PRESET",
    "estimate_sc_fer",
]
