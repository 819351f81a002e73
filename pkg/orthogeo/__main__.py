import sys

from orthogeo.cli.main import main

sys.exit(main())
