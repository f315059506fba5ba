# app/normalizers/spec_parser.py

from app.errors import ConfigurationError
from app.normalizers.enums import GRAPH_KIND_MAP, GRAPH_PARAMETERS, PROTOCOL_KIND_MAP, SIMULATOR_MAP
from app.schemas.specs import GraphSpec, ProtocolSpec


def _split(text: str) -> tuple[str, list[str]]:
    parts = [p.strip() for p in text.strip().split(":")]
    return parts[0].lower(), parts[1:]


def parse_graph_spec(text: str) -> GraphSpec:
    """`star:4`, `path:16`, `random:32:4[:seed]`, `hard:16:4[:seed]`, `file:<path>`."""
    head, args = _split(text)
    kind = GRAPH_KIND_MAP.get(head)
    if kind is None:
        raise ConfigurationError(f"unknown graph kind {head!r} in {text!r}")

    if kind == "file":
        if not args:
            raise ConfigurationError("file graphs need a path: file:<path>")
        return GraphSpec(kind="file", path=":".join(args))

    names = GRAPH_PARAMETERS[kind]
    if len(args) > len(names):
        raise ConfigurationError(f"{text!r}: {kind} takes at most {len(names)} parameters")
    try:
        values = {name: int(arg) for name, arg in zip(names, args)}
    except ValueError as exc:
        raise ConfigurationError(f"{text!r}: parameters must be integers") from exc
    return GraphSpec(kind=kind, **values)


def parse_protocol_spec(text: str, length: int | None = None) -> ProtocolSpec:
    """`flood:8`, `silent:4`, `roundrobin[:T]`, `decay:16`; a bare kind takes `length`."""
    head, args = _split(text)
    kind = PROTOCOL_KIND_MAP.get(head)
    if kind is None:
        raise ConfigurationError(f"unknown protocol {head!r} in {text!r}")
    if len(args) > 1:
        raise ConfigurationError(f"{text!r}: a protocol takes at most one parameter")
    try:
        parsed = int(args[0]) if args else length
    except ValueError as exc:
        raise ConfigurationError(f"{text!r}: length must be an integer") from exc
    return ProtocolSpec(kind=kind, T=parsed)


def parse_simulator(text: str) -> str:
    sim = SIMULATOR_MAP.get(text.strip().lower())
    if sim is None:
        raise ConfigurationError(f"unknown simulator {text!r}")
    return sim


def parse_constants(pairs: list[str]) -> dict[str, int]:
    """["c1=4", "cQ=6"] -> {"c1": 4, "cQ": 6}."""
    out = {}
    for pair in pairs or []:
        key, sep, value = pair.partition("=")
        if not sep:
            raise ConfigurationError(f"constant override {pair!r} is not key=value")
        try:
            out[key.strip()] = int(value)
        except ValueError as exc:
            raise ConfigurationError(f"constant {key!r} must be an integer") from exc
    return out


def parse_list(text: str, cast=str) -> list:
    """Comma-separated values from an experiment file."""
    return [cast(item.strip()) for item in str(text).split(",") if item.strip()]
