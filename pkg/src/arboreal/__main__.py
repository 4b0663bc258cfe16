import sys

from arboreal.cli import main

sys.exit(main())
