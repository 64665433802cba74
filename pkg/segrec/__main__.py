import sys

from segrec.cli import main

sys.exit(main())
