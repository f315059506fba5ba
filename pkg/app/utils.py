# app/utils.py

import math

from app.errors import ParameterError


def clog2(x: float) -> int:
    """max(1, ⌈log₂ x⌉), the clamp every phase length uses."""
    if isinstance(x, int):
        return max(1, (x - 1).bit_length()) if x > 1 else 1
    return max(1, math.ceil(math.log2(x))) if x > 1 else 1


def ceil_ln(n: int) -> int:
    return math.ceil(math.log(n)) if n > 1 else 0


def decay_lengths(max_degree: int, n: int, c3: int) -> tuple[int, int]:
    """(outer repetitions, inner sweep length) of one Decay broadcast."""
    inner = clog2(max_degree)
    loglog = math.log2(max(2.0, math.log2(max(2.0, math.log2(n)))))
    return c3 * inner * max(1, math.ceil(loglog)), inner


def window_size(n: int, c_q: int) -> int:
    return max(1, c_q * max(1, ceil_ln(n)))


def learn_delays_iterations(q: int) -> int:
    """⌈log₂(Q + 1)⌉ halvings close a window of Q + 1 candidates."""
    return q.bit_length()


def parse_seed_range(text: str) -> list[int]:
    """
    "7" -> [7], "1..100" -> [1, ..., 100], "1,5,9" -> [1, 5, 9].
    """
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            seeds = list(range(int(lo), int(hi) + 1))
        else:
            seeds = [int(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise ParameterError(f"bad seed range {text!r}") from exc

    if not seeds or min(seeds) < 0:
        raise ParameterError(f"seed range {text!r} is empty or negative")
    return seeds
