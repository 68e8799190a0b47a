"""Generate the bundled drug-like corpus by combinatorial assembly of building blocks.

Molecules are assembled from ring cores with substitution slots, filled with
substituent fragments, then kept only if they pass the default filter chain.
Output is deterministic for a given seed.

    python tools/make_corpus.py --n 10000 --out src/molevo/data/corpus.smi
"""
from __future__ import annotations

import argparse
import random
import re
import sys

from molevo.molgraph import canonical_key, parse_smiles, write_smiles
from molevo.molgraph.canon import canonical_smiles
from molevo.pipeline.filters import FilterChain

# "(<k>)" marks a substitution slot; empty slots are removed.
CORES = [
    "c1cc(<0>)ccc1(<1>)", "c1ccc(<0>)c(<1>)c1", "c1cc(<0>)cc(<1>)c1",
    "c1cc(<0>)ncc1(<1>)", "c1nc(<0>)ccc1(<1>)", "c1cnc(<0>)nc1(<1>)",
    "c1cc(<0>)sc1(<1>)", "c1cc(<0>)oc1(<1>)", "c1nc(<0>)sc1(<1>)", "c1nc(<0>)oc1(<1>)",
    "c1cn(<0>)nc1(<1>)", "n1cc(<0>)n(<1>)c1", "c1nnc(<0>)o1", "c1nnc(<0>)s1",
    "c1ccc2c(c1)cc(<0>)n2(<1>)", "c1ccc2c(c1)nc(<0>)n2(<1>)", "c1ccc2c(c1)oc(<0>)n2",
    "c1ccc2c(c1)sc(<0>)n2", "c1ccc2ncc(<0>)cc2c1", "c1ccc2c(c1)c(<0>)cn2(<1>)",
    "c1cc2ccccc2cc1(<0>)", "c1cc(<0>)c2OCOc2c1", "c1cc(<0>)c2OCCOc2c1",
    "C1CCN(<0>)CC1(<1>)", "C1CN(<0>)CCN1(<1>)", "C1COCCN1(<0>)", "C1CCCN1(<0>)",
    "C1CC1(<0>)", "C1CCCCC1(<0>)", "C1CCC(<0>)CC1(<1>)", "C1CCOC1(<0>)",
    "O=C1CCC(<0>)N1(<1>)", "O=C1NC(=O)C(<0>)S1", "O=C1CN(<0>)C(=O)N1(<1>)",
    "C1CC(<0>)CN1(<1>)", "C1CSCCN1(<0>)",
]

SUBSTITUENTS = [
    "C", "CC", "C(C)C", "OC", "OCC", "F", "Cl", "Br", "C(F)(F)F", "O", "N", "NC",
    "N(C)C", "C#N", "C(=O)N", "C(=O)NC", "C(=O)OC", "C(=O)O", "NC(=O)C", "S(=O)(=O)N",
    "S(=O)(=O)C", "OC(F)(F)F", "CO", "CN", "CCO", "CC(=O)N", "C(C)=O", "OCC(=O)N",
    "Cc2ccccc2", "c2ccccc2", "c2ccc(F)cc2", "c2ccc(Cl)cc2", "c2ccc(OC)cc2", "c2ccncc2",
    "c2cccnc2", "c2cccs2", "c2ccco2", "Oc2ccccc2", "Nc2ccccc2", "C(=O)Nc2ccccc2",
    "NC(=O)c2ccccc2", "C(=O)N2CCCC2", "C(=O)N2CCOCC2", "CN2CCOCC2", "CN2CCCCC2",
    "N2CCOCC2", "N2CCCC2", "N2CCN(C)CC2", "C2CC2", "C2CCCC2", "C(=O)NC2CC2",
    "CC(=O)Nc2ccccc2", "S(=O)(=O)N2CCCC2", "Cc2nccs2", "c2nccs2", "c2ncco2", "Cn2ccnc2",
    "c2cnn(C)c2", "C(=O)c2ccccc2", "OCc2ccccc2", "NCc2ccco2", "Sc2ccccc2", "CC2CCCO2",
]


def _fill(template: str, rng: random.Random) -> str:
    digits = iter(range(3, 10))

    def repl(m: re.Match) -> str:
        if rng.random() < 0.25:
            return ""
        sub = rng.choice(SUBSTITUENTS)
        if rng.random() < 0.3:
            # chain a second substituent onto a linker
            sub = rng.choice(["C", "CC", "O", "N", "C(=O)", "CO"]) + sub
        d = str(next(digits))
        return "(" + sub.replace("2", d) + ")"

    return re.sub(r"\(<\d>\)", repl, template)


def generate(n: int, seed: int, max_tries: int = 400_000) -> list[str]:
    rng = random.Random(seed)
    chain = FilterChain()
    keys: dict[str, str] = {}
    tries = 0
    while len(keys) < n and tries < max_tries:
        tries += 1
        core = rng.choice(CORES)
        smi = _fill(core, rng)
        try:
            g = parse_smiles(smi)
        except ValueError:
            continue
        if len(g.components()) != 1 or not chain.passes(g):
            continue
        key = canonical_key(g)
        if key not in keys:
            keys[key] = canonical_smiles(g)
    return sorted(keys.values())


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=10000)
    ap.add_argument("--seed", type=int, default=20240101)
    ap.add_argument("--out", default="src/molevo/data/corpus.smi")
    args = ap.parse_args(argv)
    smiles = generate(args.n, args.seed)
    with open(args.out, "w") as fh:
        for i, s in enumerate(smiles):
            fh.write(f"{s}\tMC{i:06d}\n")
    print(f"wrote {len(smiles)} molecules to {args.out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
