import sys

from .cli import toolbox_main

if __name__ == "__main__":
    sys.exit(toolbox_main())
