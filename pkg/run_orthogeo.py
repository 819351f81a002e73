"""
OrthoGeo — command runner.

Usage:
    python run_orthogeo.py train --method orthogeo --rank 8 --seed 1
    python run_orthogeo.py eval runs/orthogeo-r8-s1/checkpoint.json
    python run_orthogeo.py gradcheck
    python run_orthogeo.py spectrum runs/orthogeo-r8-s1/checkpoint.json runs/lora-r8-s1/checkpoint.json
    python run_orthogeo.py ablate --ranks 2,4 --seeds 1,2
"""

import sys

from orthogeo.cli.main import main

if __name__ == "__main__":
    sys.exit(main())
