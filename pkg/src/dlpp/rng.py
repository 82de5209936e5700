"""Counter-based random streams.

Every random draw in the package comes from a Philox generator whose key and
counter encode where the draw sits in the experiment:

    key     = (seed, hash(module tag))
    counter = transition_index * 2**192 + stream_id * 2**128

Each (stream, transition) owns a disjoint 2**128-wide counter region, and a
transition always draws its whole field in one canonical vectorized pass, so
the value a given cell receives is a pure function of
(seed, stream_id, tag, transition_index, cell position). Samples evolved in
parallel, in any order and under any thread count, therefore reproduce
bit-identically.
"""

import numpy as np

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


def _hash_tag(tag: str) -> int:
    h = _FNV_OFFSET
    for b in tag.encode():
        h = ((h ^ b) * _FNV_PRIME) & _MASK64
    return h


def substream(seed: int, stream_id: int, tag: str, transition: int = 0) -> np.random.Generator:
    """Generator for one (sample stream, module tag, transition) cell of the grid."""
    if not 0 <= stream_id < 2**64:
        raise ValueError(f"stream_id out of range: {stream_id}")
    if not 0 <= transition < 2**64:
        raise ValueError(f"transition out of range: {transition}")
    key = np.array([seed & _MASK64, _hash_tag(tag)], dtype=np.uint64)
    counter = np.array([0, 0, stream_id, transition], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


def scale_stream_id(scale: int, index: int) -> int:
    """Pack a (dyadic scale, interval index) pair into a collision-free stream id."""
    if not -256 <= scale < 256:
        raise ValueError(f"dyadic scale out of packing range: {scale}")
    if not -(2**31) <= index < 2**31:
        raise ValueError(f"interval index out of packing range: {index}")
    return ((scale + 256) << 32) | (index + 2**31)
