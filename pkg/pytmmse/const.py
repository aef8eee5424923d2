# Scenario defaults shared by the shipped configs
USERS = 4
PATHS = 5
TAPS = 5
SYMBOL_VARIANCE = 1.0
FRAME_LENGTH = 600
SYMBOL_PERIOD = 1.0

ANGLE_RANGE_DEG = (-90.0, 90.0)

# LR-TMMSE defaults
EPSILON = 0.1
MAX_ITERATIONS = 50
LOADING = 1e-8
PERTURBATION = 1e-3

OUTPUT_DIR_ENV = "PYTMMSE_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "results"

EQUALIZER_IDS = ("mmse-theoretical", "mmse-sample", "lr-tmmse")
SWEEP_VARIABLES = ("snr_db", "K", "R", "D", "N")
