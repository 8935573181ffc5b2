#!/usr/bin/env python3
"""End-to-end demo: build the bundled corpus, validate it, and run the full analysis.

Writes the corpus to <workdir>/corpus and the analysis outputs to <workdir>/out,
then prints the headline tables' locations.  Equivalent to:

    python scripts/make_demo_corpus.py corpus
    collabmarket validate --config corpus/demo.cfg --out out
    collabmarket analyze  --config corpus/demo.cfg --out out
"""

import argparse
import sys
from pathlib import Path

from collabmarket.cli import main as cli_main
from collabmarket.demo import write_demo_corpus


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "workdir",
        nargs="?",
        default="demo_run",
        help="working directory for corpus and outputs (default: ./demo_run)",
    )
    args = parser.parse_args(argv)
    workdir = Path(args.workdir)
    paths = write_demo_corpus(workdir / "corpus")
    config = str(paths["config"])
    out_dir = str(workdir / "out")

    rc = cli_main(["validate", "--config", config, "--out", out_dir])
    if rc != 0:
        print("demo: validation failed", file=sys.stderr)
        return rc
    rc = cli_main(["analyze", "--config", config, "--out", out_dir])
    if rc != 0:
        print("demo: analysis failed", file=sys.stderr)
        return rc

    print(f"demo corpus: {workdir / 'corpus'}")
    print(f"analysis outputs: {workdir / 'out'}")
    for name in ("table1_regional.csv", "table2_ING-INF-01.csv", "table5_aggregate.csv"):
        print(f"  {Path(out_dir) / name}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
