"""
freqalloc - subband allocation for user-centric cell-free massive MIMO

Quick Start:
    >>> from freqalloc_core.experiments import ExperimentConfig, run_compare
    >>> result = run_compare(ExperimentConfig(), "runs/demo")

CLI:
    $ freqalloc gen-channels --config configs/desk.cfg --csv
    $ freqalloc compare --config configs/desk.cfg
    $ freqalloc plot runs/hym.csv --metric total_se_bps_hz
"""

__version__ = "0.1.0"

try:
    from freqalloc_core import AllocationProblem
    from freqalloc_core.experiments import ExperimentConfig
except ImportError:
    pass

__all__ = ["AllocationProblem", "ExperimentConfig", "__version__"]
