"""Main entry point for the Q-bit simulator."""
import sys
import os

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

try:
    from cli import main
except ImportError:
    from src.cli import main


if __name__ == "__main__":
    sys.exit(main())
