"""Intervals, stabilizers and descending links in the tree poset.

Run with ``python3 demos/02_links.py``.  The last cell takes a few seconds.
"""

# %% Vertices and an elementary interval
from symthompson.campaigns import dlk_report, interval_report, stabilizer_report
from symthompson.steinfarley import base_vertex, leq
from symthompson.textio import stock_group
from symthompson.trees import comb_tree, expand_leaf, parse_tree

group = stock_group("stock:trivial:2")
tree = parse_tree(2, "00 01 1")
top = expand_leaf(tree, "1")
print("[T, id] <= [T + caret, id]:", leq(base_vertex(tree, group), base_vertex(top, group)))

report = interval_report(group, tree, ["00", "01", "1"])
entry = report["intervals"][0]
print("a caret on all 3 leaves gives", entry["size"], "vertices, Boolean:", entry["boolean"])

# %% Stabilizers count n! |H|^n
z2 = stock_group("stock:z2:2")
for row in stabilizer_report(z2, [comb_tree(2, n) for n in (1, 2, 3)])["vertices"]:
    print(f"n={row['n']}: {row['count']} elements, predicted {row['predicted']}")

# %% Descending links and their homology
print(" n  vertices  betti                target components  join")
for n in range(2, 9):
    r = dlk_report(group, comb_tree(2, n))
    print(f"{n:2d}  {r['vertex_count']:8d}  {str(r['betti']):20s} "
          f"{r['target']['components']:17d}  {r['complete_join']['ok']}")
