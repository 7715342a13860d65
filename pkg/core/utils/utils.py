import hashlib
from pathlib import Path

import numpy as np

MASK64 = (1 << 64) - 1


def getDictionaryOfLists(records):
    dict = {}
    for d in records:
        for key, value in d.items():
            if key in dict:
                dict[key].append(value)
            else:
                dict[key] = [value]
    return dict


def splitmix64(state):
    state = (state + 0x9E3779B97F4A7C15) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def deriveSeeds(seed, count):
    """Independent 64-bit child seeds from one master seed."""
    state = int(seed) & MASK64
    seeds = []
    for i in range(count):
        state, value = splitmix64(state)
        seeds.append(value)
    return seeds


def formatPercent(value, suffix="%"):
    return "%.2f%s" % (value * 100.0, suffix)


def arrayChecksum(*arrays):
    digest = hashlib.sha256()
    for array in arrays:
        contiguous = np.ascontiguousarray(array)
        digest.update(str(contiguous.dtype).encode())
        digest.update(str(contiguous.shape).encode())
        digest.update(contiguous.tobytes())
    return digest.hexdigest()


def fileChecksum(path):
    digest = hashlib.sha256()
    with Path(path).open("rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()
