"""Built-in graph catalog: every shape the acceptance suite exercises."""

from __future__ import annotations

import random

from .graphs import Graph


def interval() -> Graph:
    return Graph(["a", "b"], {"e1": ("a", "b")})


def star_3() -> Graph:
    return Graph(
        ["c", "l1", "l2", "l3"],
        {"e1": ("c", "l1"), "e2": ("c", "l2"), "e3": ("c", "l3")},
    )


def circle() -> Graph:
    """One vertex, one loop: the circle presentation without degree-2 vertices."""
    return Graph(["v"], {"e1": ("v", "v")})


def lollipop() -> Graph:
    return Graph(["v", "u"], {"loop": ("v", "v"), "stem": ("v", "u")})


def balloon() -> Graph:
    return Graph(["v", "u"], {"b": ("v", "v"), "s": ("u", "v")})


def theta() -> Graph:
    return Graph(["u", "w"], {"e1": ("u", "w"), "e2": ("u", "w"), "e3": ("u", "w")})


def infinity() -> Graph:
    return Graph(["v"], {"e1": ("v", "v"), "e2": ("v", "v")})


def dumbbell() -> Graph:
    return Graph(
        ["u", "w"],
        {"e1": ("u", "u"), "e2": ("w", "w"), "e3": ("u", "w")},
    )


def wedge_of_circles(k: int) -> Graph:
    if not 1 <= k <= 8:
        raise ValueError("supported wedge sizes: 1..8")
    return Graph(["v"], {f"c{i}": ("v", "v") for i in range(1, k + 1)})


def wedge_of_balloons(k: int = 3) -> Graph:
    vertices = ["c"] + [f"v{i}" for i in range(1, k + 1)]
    edges = {}
    for i in range(1, k + 1):
        edges[f"s{i}"] = ("c", f"v{i}")
        edges[f"b{i}"] = (f"v{i}", f"v{i}")
    return Graph(vertices, edges)


def random_tree(seed: int, grows: int = 4) -> Graph:
    """A random tree with no degree-2 vertices.

    Starts from a single edge; each growth step either hangs one new leaf on
    a vertex of degree != 1, or hangs two new leaves on a leaf (so no vertex
    ever has degree 2).
    """
    rng = random.Random(seed)
    vertices = ["v0", "v1"]
    edges = {"t0": ("v0", "v1")}
    degree = {"v0": 1, "v1": 1}
    counter = 2
    for _ in range(grows):
        v = rng.choice(sorted(vertices))
        children = 2 if degree[v] == 1 else 1
        for _ in range(children):
            new = f"v{counter}"
            counter += 1
            vertices.append(new)
            edges[f"t{len(edges)}"] = (v, new)
            degree[v] += 1
            degree[new] = 1
    return Graph(vertices, edges)


def catalog() -> dict:
    """Name -> Graph for the standard battery."""
    return {
        "interval": interval(),
        "star_3": star_3(),
        "circle": circle(),
        "lollipop": lollipop(),
        "balloon": balloon(),
        "theta": theta(),
        "infinity": infinity(),
        "dumbbell": dumbbell(),
        "wedge_2": wedge_of_circles(2),
        "wedge_3": wedge_of_circles(3),
        "wedge_4": wedge_of_circles(4),
        "wedge_balloons_3": wedge_of_balloons(3),
    }
