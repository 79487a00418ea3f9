import sys

from ncdist.cli import main

sys.exit(main())
