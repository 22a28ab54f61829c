import sys

from qpresheaf.cli import main

sys.exit(main())
