"""
Checking the proximity axioms
=============================

The validator enumerates every triple of subsets on small spaces and samples
triples on larger ones.  A failing axiom comes back with a witness.
"""

import random

from proxgroupoid import near, random_space, validate_axioms
from proxgroupoid.proximity import DESCRIPTIVE_METRICS

rng = random.Random(0)

space = random_space(rng, 5)
for report in validate_axioms(space, "spatial"):
    print(report.axiom, report.verdict, report.checked)

space = random_space(rng, 5, metrics=DESCRIPTIVE_METRICS, distinct_locations=True)
for report in validate_axioms(space, "descriptive"):
    print(report.axiom, report.verdict, report.checked)

# a 15-point space is too big to enumerate, so triples are sampled
big = random_space(rng, 15)
print([r.verdict for r in validate_axioms(big, "spatial", budget=500, seed=0)])

###############################################################################
# Injecting a fault: a relation that is not symmetric.


def lopsided(A, B):
    return near(A, B) and len(A) <= len(B)


for report in validate_axioms(space, "spatial", relation=lopsided):
    if not report.passed:
        print(report.to_dict())
