import os
from pathlib import Path

_PACKAGE_DIR = Path(__file__).parent / "heat_potentials"

SOE_ORDER = int(os.getenv("HEAT_SOE_ORDER", "12"))
SOE_TABLE_PATH = Path(os.getenv("HEAT_SOE_TABLE_PATH", str(_PACKAGE_DIR / "data" / "soe_tables.txt")))

TOL = float(os.getenv("HEAT_TOL", "1e-10"))

# Three-zone density representation: constant on (0, TC], log-time Chebyshev on (TC, T0], plain Chebyshev after.
T0 = float(os.getenv("HEAT_T0", "0.02"))
TC = float(os.getenv("HEAT_TC", "1e-8"))

SINGLE_MESH_THRESHOLD = float(os.getenv("HEAT_SINGLE_MESH_THRESHOLD", "0.02"))
SERIES_T_MAX = float(os.getenv("HEAT_SERIES_T_MAX", "1e-3"))
GRADED_ORDER = int(os.getenv("HEAT_GRADED_ORDER", "16"))
CHECK_ORDER = int(os.getenv("HEAT_CHECK_ORDER", "24"))
TRUNCATION_RADIUS = float(os.getenv("HEAT_TRUNCATION_RADIUS", "14"))
CRAMER_C = float(os.getenv("HEAT_CRAMER_C", "1.09"))

VERBOSE = os.getenv("HEAT_VERBOSE", "0").lower() in ("1", "true", "yes")
OUTPUT_DIR = Path(os.getenv("HEAT_OUTPUT_DIR", "results"))


RED: str = "\033[91m"
GREEN: str = "\033[92m"
YELLOW: str = "\033[93m"
BLUE: str = "\033[94m"
MAGENTA: str = "\033[95m"
CYAN: str = "\033[96m"
WHITE: str = "\033[97m"
RESET: str = "\033[0m"

if __name__ == "__main__":
    print(f"SOE_ORDER: {SOE_ORDER}")
    print(f"SOE_TABLE_PATH: {SOE_TABLE_PATH}")
    print(f"TOL: {TOL}")
    print(f"T0: {T0}")
    print(f"TC: {TC}")
    print(f"SINGLE_MESH_THRESHOLD: {SINGLE_MESH_THRESHOLD}")
    print(f"SERIES_T_MAX: {SERIES_T_MAX}")
    print(f"GRADED_ORDER: {GRADED_ORDER} (check {CHECK_ORDER})")
    print(f"TRUNCATION_RADIUS: {TRUNCATION_RADIUS}")
    print(f"CRAMER_C: {CRAMER_C}")
    print(f"VERBOSE: {VERBOSE}")
    print(f"OUTPUT_DIR: {OUTPUT_DIR}")
