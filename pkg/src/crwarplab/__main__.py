import sys

from crwarplab.cli.main import main

sys.exit(main())
