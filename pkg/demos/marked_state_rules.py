"""Compare the two marked-state rules for the periodic check against the observer oracle.

The literal rule tests a cycle state from its successor onward and lets a
state marked on one cycle count for every cycle through it.  The default
rule tests the whole cycle word from the state itself, per cycle.

Run with ``python3 demos/marked_state_rules.py``.
"""

import warnings

import numpy as np

from petridetect import (
    BudgetExceededError,
    build_brg,
    build_verifier,
    check_periodic_strong_detectability,
    consistent_markings,
    load_fixture,
    marking_str,
    oracle_periodic_strong_detectability,
    random_valid_lpn,
)
from petridetect.detectability import XM_LITERAL

warnings.simplefilter("ignore", RuntimeWarning)


def verdicts(lpn, cycle_budget=None):
    brg = build_brg(build_verifier(lpn))
    default = check_periodic_strong_detectability(brg, cycle_budget=cycle_budget)
    literal = check_periodic_strong_detectability(brg, xm_semantics=XM_LITERAL, cycle_budget=cycle_budget)
    return default, literal, oracle_periodic_strong_detectability(lpn)


for name in ("xm_gap", "loop_gap"):
    lpn = load_fixture(name)
    default, literal, oracle = verdicts(lpn)
    print(f"{name}: default {default.verdict}, literal {literal.verdict}, oracle {oracle}")
    w = default.witness.word
    loop = default.witness.cycle.word
    for n in range(1, 4):
        word = w + loop * (n - 1)
        est = consistent_markings(lpn, word)
        print(f"  {''.join(word):<12} -> {', '.join(marking_str(lpn.places, m) for m in sorted(est, reverse=True))}")

rng = np.random.default_rng(7)
counts = {"default": 0, "literal": 0}
total = 0
while total < 200:
    try:
        default, literal, oracle = verdicts(random_valid_lpn(rng), cycle_budget=5000)
    except BudgetExceededError:
        continue
    total += 1
    counts["default"] += default.verdict == oracle
    counts["literal"] += literal.verdict == oracle
print(f"\nagreement with the oracle on {total} random nets:")
for rule, n in counts.items():
    print(f"  {rule}: {n}/{total}")
