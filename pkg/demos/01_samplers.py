"""Sampling uniform and minimal spanning forests on finite windows.

Walks through the four forest modes on small graphs and checks the uniform
sampler empirically against exact spanning-tree enumeration.
"""

import numpy as np

from forestlab import build_torus, fusf_window, free_msf, sample_labels, wusf_window
from forestlab.graphs import build_from_edge_list
from forestlab.models import mark_all_boundary
from forestlab.oracles import enumerate_spanning_trees

rng = np.random.default_rng(1)

print("== Uniform spanning tree of a 4x4 torus ==")
torus = build_torus(2, 4)
tree = fusf_window(torus, rng)
print("vertices:", torus.n_vertices(), " edges:", torus.n_edges())
print("tree edges sampled:", len(tree.edges), "(always n-1 for a tree)")

print()
print("== Empirical law vs enumeration on the triangle ==")
triangle = build_from_edge_list(
    {
        "vertices": [{"id": v} for v in "abc"],
        "edges": [["a", "b"], ["b", "c"], ["c", "a"]],
    }
)
enum = enumerate_spanning_trees(triangle)
counts = {t: 0 for t in enum.trees}
n = 3000
for _ in range(n):
    counts[fusf_window(triangle, rng).edges] += 1
print("the triangle has", enum.count, "spanning trees; empirical frequencies:")
for t, c in sorted(counts.items(), key=lambda kv: sorted(kv[0])):
    print("  tree", sorted(t), " freq %.3f" % (c / n), " (expect 0.333)")

print()
print("== Wired window: boundary stubs absorbed by an external vertex ==")
wired_base = mark_all_boundary(build_torus(2, 4))
omega = wusf_window(wired_base, rng)
print("wired uniform forest window has", len(omega.edges), "edges;")
print("fewer than n-1 means several clusters touch the boundary:")
sizes = {}
from forestlab.analytics import components

for comp in components(omega):
    sizes[len(comp)] = sizes.get(len(comp), 0) + 1
print("cluster size histogram:", dict(sorted(sizes.items())))

print()
print("== Minimal spanning forest from i.i.d. edge labels ==")
labels = sample_labels(torus, rng)
msf = free_msf(torus, labels)
print("free MSF of a connected window is a spanning tree:",
      len(msf.edges) == torus.n_vertices() - 1)
worst = max(labels[e] for e in msf.edges)
print("largest label used by the forest: %.3f" % worst)
