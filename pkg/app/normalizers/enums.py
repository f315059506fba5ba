# app/normalizers/enums.py

GRAPH_KIND_MAP = {
    "star": "star",

    "path": "path",
    "line": "path",

    "cycle": "cycle",
    "ring": "cycle",

    "random": "random_bounded",
    "random_bounded": "random_bounded",
    "bounded": "random_bounded",

    "hard": "bipartite_hard",
    "bipartite_hard": "bipartite_hard",

    "directed_bipartite": "directed_bipartite",
    "dbip": "directed_bipartite",
    "bipartite": "directed_bipartite",

    "file": "file",
}

# positional parameters after the kind, in order
GRAPH_PARAMETERS = {
    "star": ("delta",),
    "directed_bipartite": ("delta",),
    "path": ("n",),
    "cycle": ("n",),
    "random_bounded": ("n", "delta", "seed"),
    "bipartite_hard": ("n", "delta", "seed"),
}

PROTOCOL_KIND_MAP = {
    "silent": "silent",
    "listen": "silent",

    "flood": "flood",
    "star_flood": "flood",

    "roundrobin": "roundrobin",
    "round-robin": "roundrobin",
    "round_robin": "roundrobin",
    "rr": "roundrobin",

    "decay": "decay",
}

SIMULATOR_MAP = {
    "progress": "progress",
    "sim_progress": "progress",

    "static": "static",
    "sim_static": "static",

    "general": "general",
    "sim_general": "general",

    "repeat": "repeat",
    "repetition": "repeat",
}
