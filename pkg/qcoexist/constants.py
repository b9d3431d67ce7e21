"""
Shared constants used across the application.

Physical constants come from scipy so every module agrees on the same
values. Grid, preset and CSV layout constants live here too so the CLI,
planner and tests stay consistent.
"""

from scipy import constants as _sc

# Physical constants (SI)
PLANCK = _sc.h
BOLTZMANN = _sc.k
SPEED_OF_LIGHT = _sc.c

HZ_PER_THZ = 1e12
HZ_PER_GHZ = 1e9
W_PER_MW = 1e-3

# Raman defaults
DEFAULT_TEMPERATURE_K = 293.0
DEFAULT_RAMAN_TABLE = "raman_silica_v1.csv"

# Channel grid (ITU-T 50 GHz grid, 8-channel band, DV-QKD channel at 1547.72 nm)
QUANTUM_FREQ_THZ = 193.70
GRID_PITCH_GHZ = 50.0
BAND_CHANNELS = 8

# Planner sweep defaults
SPACING_MIN_GHZ = 100.0
SPACING_MAX_GHZ = 3000.0
SPACING_STEP_GHZ = 50.0
CROSSOVER_BOUNDS_DBM = (-40.0, 10.0)
PLACEMENT_OBJECTIVE = "qber"

# COW operating point
QBER_CUTOFF = 0.052
QUANTUM_CHANNEL_LOSS_DB = 10.5
CALIBRATION_MU_BOUNDS = (1e-9, 1.0)

# Classical receiver sensitivities (dBm) by modulation format
SENSITIVITY_DBM = {
    "16qam": -26.0,
    "pm_qpsk": -35.0,
}

# Result file layouts
SWEEP_COLUMNS = ["power_dBm", "skr_bps", "qber", "raman_cps", "fwm_cps", "leakage_cps"]
CHARACTERIZE_COLUMNS = ["channels"] + SWEEP_COLUMNS
PLACEMENT_COLUMNS = ["spacing_ghz", "raman_cps", "fwm_cps", "leakage_cps", "total_cps", "qber"]
CROSSOVER_COLUMNS = ["spacing_ghz", "crossover_dBm"]
CSV_FLOAT_FORMAT = "%.8e"  # 9 significant digits
CONFIG_SIGNIFICANT_DIGITS = 12

COMMANDS = ("placement", "sweep", "characterize", "crossover")

# Process exit codes
EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_MODEL = 3
