import sys

from shabrauer.cli import main

sys.exit(main())
