"""Play the adaptive adversary against a few barely random pairs.

    python demos/lower_bound_game.py [delta]
"""
import sys
from fractions import Fraction

from barelyrandom import GameConfig, lower_bound_game, make_pair
from barelyrandom.zoo import zoo_pairs

delta = Fraction(sys.argv[1]) if len(sys.argv) > 1 else Fraction(1, 4)
cfg = GameConfig(delta)
pairs = {"ran": make_pair("ran"), **zoo_pairs()}
print(f"delta={delta}: every pair should end with ratio >= {2 - delta}")
for name, pair in pairs.items():
    out = lower_bound_game(pair, cfg)
    path = " -> ".join(c.value for c in out.cases)
    print(f"{name:18s} p={str(out.p):4s} released={len(out.instance.jobs):6d} "
          f"ratio={float(out.ratio):.4f}  {path}")
