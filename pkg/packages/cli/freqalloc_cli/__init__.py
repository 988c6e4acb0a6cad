"""
freqalloc CLI - command-line front end for the subband allocation experiments

Commands generate channel snapshots, compare the AO, RLM and HYM solvers,
sweep UE or subband counts, tune the actor-critic and plot the CSV output.
"""

__version__ = "0.1.0"
