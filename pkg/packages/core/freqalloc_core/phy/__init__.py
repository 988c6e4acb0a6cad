from .assignment import UNASSIGNED, Assignment, validate_assignment_matrix
from .precoding import PowerNormalization, PrecodeResult, equal_power, evaluate_phy, interference_members, write_se_csv, zf_precoder

__all__ = [
    "UNASSIGNED",
    "Assignment",
    "PowerNormalization",
    "PrecodeResult",
    "equal_power",
    "evaluate_phy",
    "interference_members",
    "validate_assignment_matrix",
    "write_se_csv",
    "zf_precoder",
]
