"""
Keeping or discarding a rewriting
=================================

A rewriting is kept when its estimate is no larger than the original's.  Here
a join variable is projected away into an auxiliary predicate.
"""

from pathlib import Path

from groundsize import decide_rewrite, ground, load_file, pick_best, program_size

programs = Path(__file__).parent / "programs"
original = load_file(programs / "join_original.lp")
projected = load_file(programs / "join_projected.lp")

decision = decide_rewrite(original, projected)
print(decision)

# The same comparison is available to shell scripts: `groundsize compare a b`
# exits 0 to keep and 2 to discard.

# With several candidates, the first one with the smallest estimate wins.
candidates = [original, projected, original]
best = pick_best(candidates)
print("estimates:", [program_size(p) for p in candidates], "-> pick", best)

# Grounding both confirms the direction of the decision.
print("grounded sizes:", ground(original).size, "vs", ground(projected).size)
