"""
Step Law Presets - Named lattice step laws in `value:prob` notation.
"""

STEP_LAW_PRESETS = {
    "fair": "-1:1/2,1:1/2",
    "skip2": "-1:1/3,2:2/3",
    "drop2": "-2:1/2,1:1/2",
    "tilted": "-1:1/4,1:3/4",
}

# Laws and lengths certified exactly for the two-class partition
PARTITION_GRID_LAWS = ("fair", "skip2", "drop2")
PARTITION_GRID_LENGTHS = tuple(range(2, 11))

# Lengths certified for the single law on {S_sigma = 0} (fair walk)
LAST_VISIT_GRID_LENGTHS = (2, 4, 6, 8, 10)
