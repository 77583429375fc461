#!/usr/bin/env python
"""
Toolkit runner, equivalent to the ``zak-zcz`` console script.
"""
import sys

from app.main import main

if __name__ == "__main__":
    sys.exit(main())
