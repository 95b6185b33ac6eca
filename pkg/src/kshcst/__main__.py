import sys

from kshcst.cli import main

sys.exit(main())
