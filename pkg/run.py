import sys

from strongmax.cli import main


sys.exit(main())
