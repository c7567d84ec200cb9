import sys

from ezqhdl.cli import main

sys.exit(main())
