import sys

from bondcat.cli import main

sys.exit(main())
