# app/repositories/hashing.py

import hashlib


def generate_text_hash(text: str) -> str:
    """SHA-256 of rendered report text; reruns with equal seeds must match."""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
