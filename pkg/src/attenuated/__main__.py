import sys

from attenuated.cli import main

sys.exit(main())
