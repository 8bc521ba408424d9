"""Deterministic seed derivation.

乱数シードを決定的に導出するモジュール.
"""

from __future__ import annotations

import numpy as np


def derive_seed(master_seed: int, *keys: int) -> int:
    """Derive an independent 63-bit seed from a master seed and integer keys.

    マスターシードと整数キーから独立したシードを導出する.

    The same (master_seed, keys) always gives the same seed, and distinct key tuples give
    statistically independent streams.

    Args:
        master_seed (int): Master seed / マスターシード
        *keys (int): Stream identifiers such as series index, run index and stage tag /
            時系列番号、試行番号、段階タグなどのストリーム識別子

    Returns:
        int: Derived seed / 導出されたシード
    """
    sequence = np.random.SeedSequence(entropy=master_seed, spawn_key=tuple(keys))
    state = sequence.generate_state(2, dtype=np.uint32)
    return (int(state[0]) << 31) ^ int(state[1])
