# app/repositories/graph_repo.py

from pathlib import Path

from app.core.network import Network
from app.errors import ConfigurationError


def write_edge_list(network: Network, path: str | Path) -> None:
    """First line `n m directed`, then one `u v` per edge (per arc if directed)."""
    edges = network.edges()
    lines = [f"{network.n} {len(edges)} {int(network.directed)}"]
    lines.extend(f"{u} {w}" for u, w in edges)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_edge_list(path: str | Path) -> Network:
    try:
        rows = [line.split() for line in Path(path).read_text(encoding="utf-8").splitlines() if line.strip()]
    except OSError as exc:
        raise ConfigurationError(f"cannot read graph file {path}: {exc}") from exc
    if not rows or len(rows[0]) != 3:
        raise ConfigurationError(f"{path}: header must be `n m directed`")

    try:
        n, m, directed = (int(x) for x in rows[0])
        edges = [(int(u), int(w)) for u, w in rows[1:]]
    except ValueError as exc:
        raise ConfigurationError(f"{path}: malformed line ({exc})") from exc
    if len(edges) != m:
        raise ConfigurationError(f"{path}: header announces {m} edges, found {len(edges)}")

    return Network.from_edges(n, edges, directed=bool(directed), name=f"file:{Path(path).name}")
