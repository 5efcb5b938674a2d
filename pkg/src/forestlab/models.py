"""Model descriptors shared by the experiment drivers and the CLI: graph
builders addressed by name plus forest samplers addressed by mode."""

from .errors import ConfigError
from .forests import (
    ForestConfig,
    free_msf,
    fusf_window,
    kruskal_forest,
    sample_labels,
    wilson_ust,
    wusf_window,
)
from .graphs import (
    Graph,
    VertexMark,
    build_from_edge_list,
    build_torus,
    build_tree_ball,
    wire_boundary,
)

FOREST_MODES = ("fusf", "wusf", "fmsf", "wmsf")


def mark_all_boundary(g, stubs=1):
    """Copy of g with every vertex boundary-marked; lets a torus be wired."""
    vertices = {
        v: VertexMark(boundary=True, stubs=stubs, role=m.role)
        for v, m in g.vertices.items()
    }
    return Graph(vertices, dict(g.edges), wired=g.wired)


def build_graph(desc):
    """desc: {"builder": name, "params": {...}, "wire_all": bool}."""
    builder = desc.get("builder")
    params = desc.get("params", {})
    if builder == "torus":
        g = build_torus(int(params["dimension"]), int(params["side"]))
    elif builder == "tree_ball":
        g = build_tree_ball(int(params["degree"]), int(params["radius"]))
    elif builder == "edge_list":
        g = build_from_edge_list(params["spec"])
    else:
        raise ConfigError("unknown graph builder %r" % (builder,))
    if desc.get("wire_all"):
        g = mark_all_boundary(g, int(desc.get("stubs", 1)))
    return g


def make_sampler(g, mode):
    """Returns fn(rng) -> window ForestConfig for the named forest mode."""
    if mode == "fusf":
        return lambda rng: fusf_window(g, rng)
    if mode == "wusf":
        return lambda rng: wusf_window(g, rng)
    if mode == "fmsf":
        return lambda rng: free_msf(g, sample_labels(g, rng))
    if mode == "wmsf":
        gh = wire_boundary(g)
        star = gh.wired_star()

        def sample(rng):
            labels = sample_labels(gh, rng)
            return ForestConfig(g, kruskal_forest(gh, labels) - star, mode="wmsf")

        return sample
    raise ConfigError("unknown forest mode %r" % (mode,))
