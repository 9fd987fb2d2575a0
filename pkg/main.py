import sys

from defect_nls.harness.cli import main

if __name__ == "__main__":
    sys.exit(main())
