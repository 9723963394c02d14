from pressure_lab.pressure.bowen import bowen_pressure
from pressure_lab.pressure.cross_validate import cross_validate
from pressure_lab.pressure.grassmann import birkhoff_sigma, frame_score, grassmann_pressure, sigma_k
from pressure_lab.pressure.periodic import (
    continuity_probe,
    periodic_grassmann_bound,
    periodic_pressure,
    ruelle_bound,
    variational_lower_bound,
)
from pressure_lab.pressure.sft import sft_entropy, sft_perron_data, sft_pressure, sft_trace_pressure

__all__ = [
    "bowen_pressure",
    "cross_validate",
    "birkhoff_sigma",
    "frame_score",
    "grassmann_pressure",
    "sigma_k",
    "continuity_probe",
    "periodic_grassmann_bound",
    "periodic_pressure",
    "ruelle_bound",
    "variational_lower_bound",
    "sft_entropy",
    "sft_perron_data",
    "sft_pressure",
    "sft_trace_pressure",
]
