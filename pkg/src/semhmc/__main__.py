import sys

from semhmc.cli import main

sys.exit(main())
