"""Walk the seven-place example through every stage of the checker.

Run with ``python3 demos/walkthrough.py``.
"""

import warnings

from petridetect import (
    build_brg,
    build_verifier,
    check_periodic_strong_detectability,
    check_strong_detectability,
    consistent_markings,
    load_fixture,
    marked_states,
    marking_str,
    reachability_graph,
    simple_cycles,
)

warnings.simplefilter("ignore", RuntimeWarning)

lpn = load_fixture("fig1")
print(f"net: {len(lpn.places)} places, {len(lpn.transitions)} transitions")
print(f"  unobservable: {', '.join(lpn.unobservable)}")
print(f"  reachability graph: {len(reachability_graph(lpn).nodes)} markings")

vn = build_verifier(lpn)
print(f"\nverifier: {len(vn.lpn.places)} places, "
      f"{len(vn.lpn.unobservable)} unobservable and {len(vn.lpn.observable)} observable transitions")
print(f"  its reachability graph: {len(reachability_graph(vn.lpn).nodes)} markings")

brg = build_brg(vn)
print(f"\nbasis reachability graph: {len(brg.states)} states")
for x in brg.states:
    print(f"  {x.name}: {brg.describe(x):<10} alpha={x.alpha} diagonal={x.diag_equal}")

cycles = simple_cycles(brg)
xm = marked_states(brg, cycles)
print("\nsimple cycles and the states each one marks:")
for cyc in cycles:
    print(f"  {cyc}: {sorted(x.name for x in xm.per_cycle[cyc]) or 'none'}")

for report in (check_strong_detectability(brg), check_periodic_strong_detectability(brg)):
    print(f"\n{report.property}: {'holds' if report.verdict else 'fails'}")
    if report.witness is not None:
        w = report.witness.word
        print(f"  witness word {''.join(w)} via cycle {report.witness.cycle}")
        for i in range(len(w) + 1):
            est = consistent_markings(lpn, w[:i])
            shown = ", ".join(marking_str(lpn.places, m) for m in sorted(est, reverse=True))
            print(f"    after {''.join(w[:i]) or '(nothing)':<4} {len(est)} marking(s): {shown}")
