"""
How far off is the estimate?
============================

The error factor divides the estimate by the size of an actual grounding.
The package ships a small reference grounder that produces only rule
instances whose positive bodies can be derived.
"""

from pathlib import Path

from groundsize import analyze, error_factor, ground, load_file, mean_error_factor
from groundsize.oracle import format_ground

programs = Path(__file__).parent / "programs"

# The first example program: the estimate and the grounding agree.
pi1 = load_file(programs / "pi1.lp")
print(format_ground(ground(pi1), pi1.decode))

# Instantiating every variable with every constant gives one more rule, for
# the p(3) instance that can never fire.
naive = ground(pi1, naive=True)
print("naive grounding:", naive.size, "rules; argument sizes",
      {str(a): s for a, s in naive.argument_sizes.items()})

# Over all demo programs (keys left out), report the estimate, the grounding and their ratio.
factors = []
for path in sorted(programs.glob("*.lp")):
    prog = load_file(path)
    predicted, actual = analyze(prog).total, ground(prog).size
    factor = error_factor(predicted, actual)
    factors.append(factor)
    print(f"{path.name:22} predicted {predicted:4}  actual {actual:4}  factor {float(factor):.3f}")
print(f"average error factor: {float(mean_error_factor(factors)):.3f}")

# For a real grounder use the harness, for example
#   python -m groundsize.harness --encoding enc.lp --batch instances/
# which runs `gringo --text` and counts the rules it prints.
