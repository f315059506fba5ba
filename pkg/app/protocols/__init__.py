from app.protocols.base import RadioProtocol, ScheduleCursor, StaticProtocol, StaticSchedule
from app.protocols.library import (
    DecayBroadcastProtocol,
    RoundRobinProtocol,
    SilentProtocol,
    StarFloodProtocol,
    decay_decision,
    decay_round,
    make_protocol,
)
from app.protocols.schedule import as_static, derive_static_schedule

__all__ = [
    "DecayBroadcastProtocol",
    "RadioProtocol",
    "RoundRobinProtocol",
    "ScheduleCursor",
    "SilentProtocol",
    "StarFloodProtocol",
    "StaticProtocol",
    "StaticSchedule",
    "as_static",
    "decay_decision",
    "decay_round",
    "derive_static_schedule",
    "make_protocol",
]
