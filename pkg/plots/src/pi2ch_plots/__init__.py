"""Figure generation from simulation CSV outputs.

Three scripts, one per figure kind: space-time waterfalls of the two fields,
log-scale conservation-drift curves, and the closed-vs-direct curvature
scatter.  Everything is driven by the CSV files alone.
"""

__version__ = "0.1.0"
