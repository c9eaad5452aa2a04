#!/usr/bin/env python3
"""Run the gridspectra command-line tool."""
from gridspectra.main import main

if __name__ == "__main__":
    main()
