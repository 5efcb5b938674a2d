"""Delayed random walks on forest clusters and the mass transport principle.

A delayed walk proposes a uniform ambient edge each step and moves only along
forest edges, so its environment seen from the walker is stationary; we check
a one-step consequence empirically.  On a vertex-transitive window, any
diagonally invariant transport sends as much mass as it receives, which the
checker verifies bit-exactly with rational arithmetic.
"""

import numpy as np

from forestlab import build_torus, fusf_window
from forestlab.analytics import TransportSpec, mtp_check
from forestlab.models import make_sampler
from forestlab.walks import delayed_srw, stationarity_check

rng = np.random.default_rng(9)
g = build_torus(2, 6)

print("== A two-sided delayed walk on a torus spanning tree ==")
omega = fusf_window(g, rng)
trace = delayed_srw(g, omega, "0,0", 12, 12, rng)
print("forward trajectory: ", " -> ".join(trace.forward))
print("backward trajectory:", " -> ".join(trace.backward))
accepted = sum(1 for _, acc in trace.steps if acc)
print("accepted %d of %d proposals (tree degree / ambient degree on average)"
      % (accepted, len(trace.steps)))

print()
print("== One-step stationarity of the forest degree ==")
out = stationarity_check(
    "omega_degree", g, make_sampler(g, "fusf"), "0,0", 2000, rng
)
print("mean degree at W(0): %.4f +- %.4f" % (out["mean_w0"], out["se_w0"]))
print("mean degree at W(1): %.4f +- %.4f" % (out["mean_w1"], out["se_w1"]))
print("difference %.4f vs combined SE %.4f"
      % (out["mean_diff"], out["combined_se"]))

print()
print("== Mass transport: exact rational bookkeeping ==")
for name, params in (
    ("shift", {"offset": [1, 0], "side": 6}),
    ("uniform_neighbors", {}),
    ("zero", {}),
):
    res = mtp_check(TransportSpec(name, params, "exact"), g)
    print("  %-18s sent=%s received=%s equal=%s"
          % (name, res["sent_mean"], res["received_mean"], res["equal"]))

print()
print("== Mass transport: Monte Carlo with random marks ==")
res = mtp_check(
    TransportSpec("nearest_marked", {}, "monte-carlo"),
    g, replicates=300, rng=rng,
)
print("sent     %.4f +- %.4f" % (res["sent_mean"], res["sent_se"]))
print("received %.4f +- %.4f" % (res["received_mean"], res["received_se"]))
