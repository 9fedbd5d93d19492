import sys

from nqss.cli import main

sys.exit(main())
