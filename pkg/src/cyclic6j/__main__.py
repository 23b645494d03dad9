"""``python -m cyclic6j`` entry point."""
import sys

from .cli import main

sys.exit(main())
