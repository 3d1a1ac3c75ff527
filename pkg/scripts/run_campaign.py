#!/usr/bin/env python3
"""Run a full verification campaign over every registered identity.

Equivalent to the installed ``thetacb`` entry point; kept as a script so
the campaign can be launched from a checkout without installing.

    python scripts/run_campaign.py --m-max 4 --n-max 4 --trials 5 --seed 1
"""

import sys

from thetacb.cli import main

if __name__ == "__main__":
    raise SystemExit(main(sys.argv[1:]))
