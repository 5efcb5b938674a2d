"""The label calculus behind minimal spanning forests.

Z(e) is the smallest possible value of the largest label on a cycle through e
(not counting e itself), and phi(e) is the edge attaining it.  Whether e
belongs to the forest is exactly the comparison of its label with Z(e), which
gives a four-case constant-time rule for updating the forest when one label
changes.
"""

from forestlab import free_msf, predict_label_change, z_value
from forestlab.forests import kruskal_forest, threshold_subgraph
from forestlab.graphs import build_from_edge_list

cycle = build_from_edge_list(
    {
        "vertices": [{"id": "v%d" % i} for i in range(5)],
        "edges": [["v%d" % i, "v%d" % ((i + 1) % 5)] for i in range(5)],
    }
)
labels = {0: 0.15, 1: 0.5, 2: 0.35, 3: 0.8, 4: 0.6}
print("labels on the 5-cycle:", labels)
forest = free_msf(cycle, labels)
print("forest drops the cycle's largest label:", sorted(forest.edges))

for e in sorted(cycle.edges):
    res = z_value(cycle, labels, e)
    side = "in " if e in forest.edges else "out"
    print("  edge %d: label %.2f  Z=%.2f  phi=%d  -> %s"
          % (e, labels[e], res.z, res.phi, side))

print()
print("== Incremental update vs recomputation ==")
for new in (0.05, 0.99):
    predicted = predict_label_change(cycle, labels, 3, new)
    relabelled = dict(labels)
    relabelled[3] = new
    recomputed = kruskal_forest(cycle, relabelled)
    print("edge 3 -> %.2f: predicted %s, recomputed agrees: %s"
          % (new, sorted(predicted.edges), predicted.edges == recomputed))

print()
print("== Threshold filtration ==")
for alpha in (0.2, 0.4, 0.7, 1.0):
    sub = threshold_subgraph(cycle, labels, alpha)
    print("  labels < %.1f: edges %s" % (alpha, sorted(sub)))
print("the forest is exactly the edges that connect something new when they"
      " appear in this filtration.")
