"""forestlab: a desk-scale laboratory for random spanning forests.

Samplers for uniform and minimal spanning forests on finite graph windows,
the weak-insertion-tolerance surgery machinery, exact brute-force oracles,
and cluster-indistinguishability experiments.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    CapExceededError,
    ConfigError,
    ForestLabError,
    GraphSpecError,
    SurgeryError,
)
from .forests import (  # noqa: F401
    ForestConfig,
    ZResult,
    free_msf,
    fusf_window,
    predict_label_change,
    sample_labels,
    threshold_subgraph,
    wilson_ust,
    wired_msf_window,
    wusf_window,
    z_value,
)
from .graphs import (  # noqa: F401
    Graph,
    VertexMark,
    build_decorated,
    build_from_edge_list,
    build_torus,
    build_tree_ball,
    wire_boundary,
)
