import sys

from deckscore.cli import main

sys.exit(main())
