from .evaluate import ConstraintViolations, ObjectiveReport, ObjectiveWeights, check_constraints, evaluate, reference_se
from .metrics import gini, min_eigenvalue, subband_gram, total_se
from .problem import AllocationProblem

__all__ = [
    "AllocationProblem",
    "ConstraintViolations",
    "ObjectiveReport",
    "ObjectiveWeights",
    "check_constraints",
    "evaluate",
    "gini",
    "min_eigenvalue",
    "reference_se",
    "subband_gram",
    "total_se",
]
