"""
Local development entry point.

Runs the qcoexist command group with developer settings, e.g.

    python run.py sweep --config run.json --out results/

Keeps startup simple and avoids embedding app logic here.
"""

import os

# Allow overriding config via environment variable for dev/test flexibility
os.environ.setdefault("QCOEXIST_CONFIG", "qcoexist.config.DevConfig")

from qcoexist.cli import main  # noqa: E402

if __name__ == "__main__":
    main()
