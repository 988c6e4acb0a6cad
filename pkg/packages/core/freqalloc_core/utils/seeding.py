import zlib

import numpy as np

SEED_MASK = (1 << 64) - 1


def _stream_key(stream: str) -> int:
    return zlib.crc32(stream.encode("utf-8"))


def seed_sequence(seed: int, stream: str, *index: int) -> np.random.SeedSequence:
    """
    Derive an independent seed sequence for a named stream

    The same (seed, stream, index) always maps to the same sequence, so
    results do not depend on the order in which streams are consumed.
    """
    return np.random.SeedSequence([seed & SEED_MASK, _stream_key(stream), *(int(i) for i in index)])


def child_rng(seed: int, stream: str, *index: int) -> np.random.Generator:
    return np.random.default_rng(seed_sequence(seed, stream, *index))


def child_seed(seed: int, stream: str, *index: int) -> int:
    return int(seed_sequence(seed, stream, *index).generate_state(1, dtype=np.uint64)[0])
