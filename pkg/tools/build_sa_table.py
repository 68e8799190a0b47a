"""Count circular-fingerprint environments over a SMILES corpus and write an SA fragment table.

    python tools/build_sa_table.py src/molevo/data/corpus.smi --out src/molevo/data/sa_fragments.tsv
"""
from __future__ import annotations

import argparse
import sys

from molevo.molgraph import parse_smiles
from molevo.objectives.sascore import build_fragment_table


def _graphs(paths):
    for p in paths:
        with open(p) as fh:
            for line in fh:
                smi = line.split()[0] if line.strip() else ""
                if not smi or smi.startswith("#"):
                    continue
                try:
                    yield parse_smiles(smi)
                except ValueError as e:
                    print(f"skipping {smi}: {e}", file=sys.stderr)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("corpus", nargs="+")
    ap.add_argument("--out", default="src/molevo/data/sa_fragments.tsv")
    ap.add_argument("--coverage", type=float, default=0.8)
    args = ap.parse_args(argv)
    table = build_fragment_table(_graphs(args.corpus), args.coverage)
    table.write(args.out)
    print(f"wrote {len(table)} fragment contributions to {args.out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
