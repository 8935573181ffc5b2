#!/usr/bin/env python3
"""Write the bundled demo corpus (publications + registries + config) to a directory."""

import argparse
import sys
from pathlib import Path

from collabmarket.demo import write_demo_corpus


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "directory",
        nargs="?",
        default="demo_corpus",
        help="target directory (created if missing; default: ./demo_corpus)",
    )
    args = parser.parse_args(argv)
    paths = write_demo_corpus(Path(args.directory))
    for name, path in sorted(paths.items()):
        print(f"{name}: {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
