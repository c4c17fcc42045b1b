import sys

from rca.cli import main

sys.exit(main())
