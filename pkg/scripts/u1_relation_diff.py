"""Compare the stated U1 relations with the relations found numerically in the same degrees.

For each stated relation the script enumerates every generator monomial of its
multidegree, finds the kernel of the evaluation matrix at random tensors, and
prints both relations side by side together with the monomials on which they differ.
"""

from __future__ import annotations

import argparse

from slninv.brackets import find_relations, relation_from_poly
from slninv.cases import case_u1


def text(rel) -> str:
    parts = []
    for m, c in sorted(rel.items()):
        mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in sorted(m))
        parts.append(f"{'+' if c > 0 else '-'} {abs(c)}*{mono}")
    return " ".join(parts)


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    data = case_u1()
    sampler = data.sampler()
    for name, deg in data.relation_degrees().items():
        stated = relation_from_poly(data.relations[name])
        found = find_relations(data.graphs, data.degrees, deg, sampler, seed=a.seed)
        print(f"{name} multidegree {deg}: relation space dimension {len(found)}")
        print(f"  stated:   {text(stated)}")
        for rel in found:
            lead = next(iter(sorted(rel)))
            scale = stated.get(lead, 1) / rel[lead]
            print(f"  computed: {text({m: c * scale for m, c in rel.items()})}")
            s = {tuple(sorted(m)) for m in stated}
            g = {tuple(sorted(m)) for m in rel}
            print(f"  only stated:   {[text({m: 1}) for m in s - g]}")
            print(f"  only computed: {[text({m: 1}) for m in g - s]}")


if __name__ == "__main__":
    main()
