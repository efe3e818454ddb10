import sys
from time import time

from configuration import GREEN, RESET
from heat_potentials.cli import main

if __name__ == "__main__":
    start = time()
    code = main()
    print(f"{GREEN}time {round(time() - start, 2)} s{RESET}", file=sys.stderr)
    sys.exit(code)
