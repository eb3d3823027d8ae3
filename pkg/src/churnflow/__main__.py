import sys

from churnflow.cli import main

sys.exit(main())
