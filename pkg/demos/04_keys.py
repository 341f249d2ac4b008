"""
Primary keys shrink rule-size products
======================================

When the first two positions of lookup/3 determine the third, the variable at
the third position adds no new instances and drops out of the product.
"""

from pathlib import Path

from groundsize import analyze, ground, kvars, load_file, load_keys

programs = Path(__file__).parent / "programs"
keys = load_keys(programs / "keyed.keys")
print("declared keys:", keys)

plain = load_file(programs / "keyed.lp")
keyed = load_file(programs / "keyed.lp", keys=keys)
rule = plain.rules[-1]

# Without keys every body variable counts; with them V is left out.
print("kvars without keys:", sorted(kvars(rule)))
print("kvars with keys:   ", sorted(kvars(rule, keys)))

# The keyed total is much closer to what grounding actually produces.
print("estimate without keys:", analyze(plain).total)
print("estimate with keys:   ", analyze(keyed).total)
print("reference grounding:  ", ground(plain).size)
