from pressure_lab.domination.splitting import (
    candidate_splitting,
    default_horizon,
    domination_gap,
    domination_report,
    n_domination_test,
    weakness_test,
)

__all__ = [
    "candidate_splitting",
    "default_horizon",
    "domination_gap",
    "domination_report",
    "n_domination_test",
    "weakness_test",
]
