"""
Settings - Environment-driven defaults.

Values are read once at import time. A `.env` file in the working directory is
honoured, so a desk setup can pin workers or the enumeration cap without flags.
"""

import os

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

DEFAULT_WORKERS = int(os.getenv("LASTPASS_WORKERS", "1"))
PATH_CAP = int(os.getenv("LASTPASS_PATH_CAP", str(10**7)))
KS_THRESHOLD = float(os.getenv("LASTPASS_KS_THRESHOLD", "0.001"))
LOG_LEVEL = os.getenv("LASTPASS_LOG_LEVEL", "WARNING")

# Level-crossing comparisons on piecewise-linear paths
LEVEL_TOLERANCE = 1e-12
