"""Stage-by-stage priority construction of a p-group from a predicate.

Each row e of the predicate table drives one requirement. While the row
stays silent the requirement keeps opening fresh depth-(e+1) chains, so
the count of such chains grows without bound; once the row fires the
requirement instead deepens the chains it was watching, freezing the
count. The group assembled in the limit therefore stores, in its
invariant u_e, whether row e held only finitely often.
"""

from ulmkit import PredicateTable, invariants_of, nat, run_construction

# a silent table: every row holds nowhere, so every u_e should escape
silent = PredicateTable(1)
run = run_construction(silent, 12, window=5)
print("silent table, estimates u_0..u_4 after each stage:")
for s, row in enumerate(run.history, start=1):
    print(f"  stage {s:2}: " + " ".join(f"{v:2}" for v in row[:5]))

# a table whose row 0 fires at every stage: requirement 0 is answered
# each time it opens a chain, so u_0 stays pinned near zero while the
# silent rows e >= 1 keep climbing
noisy = PredicateTable(64, {(0, y) for y in range(64)}, {0})
run2 = run_construction(noisy, 12, window=5)
print("\nrow 0 firing cofinally, same window:")
for s, row in enumerate(run2.history, start=1):
    print(f"  stage {s:2}: " + " ".join(f"{v:2}" for v in row[:5]))

# the chain part of the listing is an honest tree group; its computed
# invariants must match the stage estimates (a short run keeps the tree
# small enough to enumerate)
short = run_construction(noisy, 4, window=5)
tree = short.state.as_group_tree()
prof = invariants_of(tree)
computed = [prof.value_at(nat(k)) for k in range(5)]
print(f"\nafter 4 stages the listing spans a group of size {tree.size}")
print(f"invariants of the assembled tree: {computed}")
print(f"stage estimate:                   {list(short.history[-1][:5])}")
assert computed == list(short.history[-1][:5])
