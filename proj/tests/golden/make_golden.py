#!/usr/bin/env python3
# Copyright 2026 The crset Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the golden vectors in this directory.

Written against hashlib and struct only, independently of the C++ code, so the
files pin the wire format and hashing rule from the outside.
"""

import hashlib
import math
import os
import struct

HERE = os.path.dirname(os.path.abspath(__file__))


def bit_index(rid: bytes, level: int, salt: bytes, m: int) -> int:
    digest = hashlib.sha256(rid + struct.pack(">H", level) + salt).digest()
    return int.from_bytes(digest[:8], "big") % m


def encode(salt: bytes, n_max: int, levels) -> bytes:
    out = b"CRST" + bytes([1]) + salt + struct.pack(">Q", n_max)
    out += struct.pack(">H", len(levels))
    for m, bits in levels:
        arr = bytearray((m + 7) // 8)
        for b in bits:
            arr[b // 8] |= 0x80 >> (b % 8)
        out += struct.pack(">Q", m) + bytes(arr)
    return out


def pack(payload: bytes, blob_size: int):
    framed = struct.pack(">Q", len(payload)) + payload
    count = -(-len(framed) // blob_size)
    framed += bytes(count * blob_size - len(framed))
    return [framed[i * blob_size:(i + 1) * blob_size] for i in range(count)]


def filter_size(n: int, p: float) -> int:
    return math.ceil(-n / math.log1p(-p))


def build(valid, revoked, salt, p0, p, floor):
    """Plain cascade over the given sets (no padding)."""
    levels = []
    included, excluded = list(valid), list(revoked)
    level = 0
    while True:
        m = filter_size(max(len(included), floor), p0 if level == 0 else p)
        bits = {bit_index(x, level, salt, m) for x in included}
        fps = [x for x in excluded if bit_index(x, level, salt, m) in bits]
        levels.append((m, sorted(bits)))
        excluded, included = included, fps
        level += 1
        if not included:
            return levels


def main():
    # Hand-built cascade: exercises partial final bytes and a 1-bit level.
    salt = bytes(range(32))
    small = encode(salt, 3, [(13, [0, 5, 12]), (8, [7]), (1, [0])])
    with open(os.path.join(HERE, "small_cascade.hex"), "w") as f:
        f.write(small.hex() + "\n")
    with open(os.path.join(HERE, "small_cascade_blobs64.hex"), "w") as f:
        for blob in pack(small, 64):
            f.write(blob.hex() + "\n")

    # Reference cascade built here, checked by the C++ lookup.
    ids = [hashlib.sha256(b"crset-golden-%d" % i).digest() for i in range(300)]
    valid, revoked = ids[:100], ids[100:]
    salt = hashlib.sha256(b"crset-golden-salt").digest()
    p = 0.5
    levels = build(valid, revoked, salt, math.sqrt(p) / 2, p, 16)
    with open(os.path.join(HERE, "reference_cascade.hex"), "w") as f:
        f.write(encode(salt, len(valid), levels).hex() + "\n")
    with open(os.path.join(HERE, "reference_ids.txt"), "w") as f:
        for x in valid:
            f.write("valid " + x.hex() + "\n")
        for x in revoked:
            f.write("revoked " + x.hex() + "\n")
    print("levels:", [m for m, _ in levels])


if __name__ == "__main__":
    main()
