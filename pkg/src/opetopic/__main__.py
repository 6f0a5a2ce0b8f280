import sys

from opetopic.cli import main

sys.exit(main())
