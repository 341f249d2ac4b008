"""
Recursion through strongly connected components
===============================================

Adding q(Y,X) :- s(X,Y,Z) makes q and s depend on each other.  The estimator
then orders the component's rules into layers and evaluates them layer by
layer.
"""

from pathlib import Path

from groundsize import analyze, is_tight, load_file, to_dot

prog = load_file(Path(__file__).parent / "programs" / "pi3.lp")
result = analyze(prog)

# The dependency graph now has a cycle, so the program is no longer tight.
print("tight:", is_tight(result.graph))

# Components come out in topological order; a predicate's rank is its
# component's position.
ca = result.components
for c, members in enumerate(ca.components):
    names = ", ".join(f"{n}/{a}" for n, a in sorted(members))
    print(f"component {c + 1}: {{{names}}}")

# The {q, s} module splits into three layers: the exit rule first, then each
# rule as soon as the predicates it reads from inside the component are
# available.
q = ("q", 2)
for k, group in enumerate(ca.partitions[ca.component_of[q]], start=1):
    print(f"layer {k}:", [str(prog.rules[i]) for i in group])

# q[2] used to hold only the constant 1; through s it now also sees s[1].
table = result.table
for arg in table.arguments():
    print(f"{str(arg):8} range={table.range[arg]} size={table.size[arg]}")
print("total:", result.total)

# Both graphs in DOT form, ready for `dot -Tsvg`.
print(to_dot(result.graph, ca))
