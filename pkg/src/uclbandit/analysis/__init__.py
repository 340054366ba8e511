from .bounds import (
    BlockBounds,
    BoundCurve,
    bound_lai_robbins,
    bound_theorem2,
    bound_theorem3,
    bound_theorem5,
    bound_theorem6,
    gammas,
)
from .phenotype import PhenotypeFit, PhenotypeResult, fit_phenotype
from .regret import (
    RunTrace,
    cumulative_expected_regret,
    observed_regret,
    pull_counts,
    regret_from_counts,
    switch_counts,
    transition_cost,
)
