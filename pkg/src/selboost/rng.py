"""Seeded pseudo-random primitives used by every split operation.

The generator and shuffle are pinned bit-exactly so that any port of this
package (whatever the language) reproduces identical splits:

* Generator: SplitMix64. State is a 64-bit unsigned integer initialised
  directly with the user seed (masked to 64 bits). Each draw advances the
  state by 0x9E3779B97F4A7C15 and mixes it with the
  xor-shift/multiply constants 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB.
* Shuffle: Fisher-Yates, iterating i from len-1 down to 1 and swapping
  position i with position (next_u64() % (i + 1)).

Reference values (first three draws): seed 0 ->
16294208416658607535, 7960286522194355700, 487617019471545679.
"""

from __future__ import annotations

from typing import MutableSequence

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """SplitMix64 generator over Python integers (exact 64-bit semantics)."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def shuffle(self, items: MutableSequence) -> None:
        """In-place Fisher-Yates shuffle driven by this generator."""
        for i in range(len(items) - 1, 0, -1):
            j = self.next_u64() % (i + 1)
            items[i], items[j] = items[j], items[i]
