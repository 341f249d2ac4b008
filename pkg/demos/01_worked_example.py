"""
Estimating argument ranges and sizes
====================================

A three-predicate program, estimated argument by argument without grounding.
"""

from pathlib import Path

from groundsize import ArgumentId, analyze, load_file

programs = Path(__file__).parent / "programs"

# Two facts for p, three for r, a rule copying p into q, and a four-atom join.
prog = load_file(programs / "pi2.lp")
print(Path(programs / "pi2.lp").read_text())

# `analyze` runs the whole pipeline: dependency graph, components, argument
# estimates and the rule-size products.
result = analyze(prog)
table = result.table

# Each argument p[i] gets an estimated minimum, maximum, range and size.
for arg in table.arguments():
    print(f"{str(arg):8} min={table.est_min[arg]} max={table.est_max[arg]} "
          f"range={table.range[arg]} size={table.size[arg]}")

# s[1] is bound by both r(X) and p(X).  r contributes values 2..4 and p values
# 1..2, so the lower bound is max(2, 1) = 2 and the upper bound min(4, 2) = 2:
# exactly one value survives.
s1 = ArgumentId("s", 3, 1)
print("\ns[1] range:", table.range[s1])

# Rule sizes multiply, per variable, the smallest size among the variable's
# body positions.  The join gets X: 2, Y: 2, Z: 1.
for rule, size in zip(prog.rules, result.rule_sizes):
    print(f"{size:4}  {rule.source}")
print("program total:", result.total)
