"""
What the estimator sees
=======================

Pools, intervals, aggregates, choices and arithmetic are lowered to plain
rules before any estimation happens.
"""

from groundsize import load_program

examples = [
    "p(a;b) :- q(c;d).",
    "p(1..3, a) :- q(1..2).",
    "p(X) :- q(X), #count{Y : r(X,Y)} < 3.",
    "p(1) | p(2) :- q(1).",
    "1{p(X):q(1); p(Y)}1 :- r(X,Y), s(Y).",
    ":- p(1+1), q(2*X+1), r(2*X+Y), s(Y).",
    "p(f(a)). q(f(a)).",
]

# Each statement is shown with the rules it becomes.  Symbolic constants are
# numbered above the largest integer in the program, so codes appear instead
# of names; `<n ignored>` counts literals the estimator does not read.
for text in examples:
    prog = load_program(text)
    print(text)
    for rule in prog.rules:
        marker = "" if rule.representative else "    (counted with the rule above)"
        print(f"    {rule}{marker}")
    if prog.constants.forward:
        print("     constants:", prog.constants.forward)
    print()
