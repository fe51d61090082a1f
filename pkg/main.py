#!/usr/bin/env python

import logging
import sys

from TimelikeTubes.cli import main

logger = logging.getLogger("main")

if __name__ == "__main__":
    sys.exit(main())
