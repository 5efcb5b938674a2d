"""Insertion surgery: adding an edge between clusters at bounded cost.

For uniform forests, inserting e between distinct clusters can be paid for by
deleting the first tree edge at sphere distance r+1 from the anchor; on
enumerable wired windows the probability distortion of that map is bounded by
the sphere size, which we verify exactly.

For minimal forests, a relabelling of finitely many edges keeps the forest
unchanged while pushing the compensating edge outside the radius-r ball.
"""

from forestlab.forests import ForestConfig, kruskal_forest
from forestlab.graphs import build_from_edge_list, wire_boundary
from forestlab.surgery import (
    delta_bound_check,
    msf_insert,
    msf_relabel,
    radon_nikodym_exact,
    usf_pivot_edge,
    window_pivot_of,
)

g = build_from_edge_list(
    {
        "vertices": [
            {"id": "a", "boundary": True, "stubs": 1},
            {"id": "b", "boundary": True, "stubs": 1},
            {"id": "c", "boundary": True, "stubs": 1},
        ],
        "edges": [["a", "b"], ["b", "c"], ["c", "a"]],
    }
)
gh = wire_boundary(g)
star = sorted(gh.wired_star())
print("wired triangle: window edges 0..2, boundary edges", star)

print()
print("== Uniform-forest pivot ==")
tree = ForestConfig(gh, frozenset({2, star[1], star[2]}), mode="ust")
print("spanning tree:", sorted(tree.edges), "(ca plus the b- and c-stubs)")
f = usf_pivot_edge(tree, 0, "a", 0)
print("inserting ab anchored at a, radius 0: compensating edge", f,
      "- a boundary stub, so the window only gains ab")
print("window pivot:", window_pivot_of(gh, f))

print()
print("== Exact distortion bound ==")
report = delta_bound_check(gh, 0, "a", 0)
print("spanning trees of the wired triangle:", report.n_trees)
print("atoms where ab joins distinct clusters and the pivot is defined:",
      report.n_atoms)
print("max preimages per image tree:", report.max_preimages,
      " sphere size:", report.sphere_size,
      " bound satisfied:", report.satisfied)
rn = radon_nikodym_exact(gh, 0, "a", 0)
print("per-atom probability ratios:",
      {tuple(k): round(v, 3) for k, v in rn.items()})

print()
print("== Minimal-forest relabelling ==")
labels = {0: 0.95, 1: 0.3, 2: 0.5, star[0]: 0.12, star[1]: 0.2, star[2]: 0.9}
forest = kruskal_forest(gh, labels)
print("labels:", labels)
print("forest:", sorted(forest), " window part:",
      sorted(forest - gh.wired_star()))
rel = msf_relabel(gh, labels, 0, "a", 0)
print("relabelling for inserting ab: pivot sequence", rel.pivots,
      " thresholds", tuple(round(z, 3) for z in rel.thresholds))
print("terminal edge", rel.terminal,
      "(window pivot %s)" % rel.window_pivot)
print("forest unchanged by the relabelling:",
      kruskal_forest(gh, rel.labels) == forest)
new_labels, inserted = msf_insert(gh, rel, 0)
print("after dropping ab's label below the threshold, the window forest is",
      sorted(inserted.edges - gh.wired_star()))
