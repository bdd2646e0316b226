"""Pure-Python kernel for the enumeration hot paths.

``freecactus._kernel`` picks either this module or the compiled twin
``freecactus._core`` at import time.  Both expose the same four functions
with identical outputs, including the exact iteration order of
``iter_nc_blocks``; the test suite asserts parity between them.  If you
change an algorithm here, change it in ``_core.pyx`` as well.

Everything below speaks plain tuples and ints.  Wrapping into Partition
objects, rational arithmetic and so on happens in the calling layers, so
the compiled twin never needs to know about them.
"""

from __future__ import annotations

from typing import Iterator

__all__ = [
    "iter_nc_blocks",
    "count_nc",
    "y_level_histogram",
    "word_profile_counts",
]


def iter_nc_blocks(m: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Yield every non-crossing partition of {1..m} as a tuple of blocks.

    Blocks are ascending tuples sorted by their minima (canonical form).
    The order of the stream is the recursive block-of-the-minimum order:
    first close the block of the current minimum, then extend it with each
    feasible next element in increasing order, partitioning the skipped gap
    recursively.  For m=3 this gives

        {1}{2}{3}, {1}{2 3}, {1 2}{3}, {1 2 3}, {1 3}{2}

    and the order is deterministic, documented, and frozen: tests and the
    compiled kernel both depend on it.
    """
    if m < 0:
        raise ValueError("ground set size must be non-negative")
    return _nc_of(tuple(range(1, m + 1)))


def _nc_of(seq):
    if not seq:
        yield ()
        return
    yield from _grow((seq[0],), 0, (), seq[1:])


def _grow(block, idx, done, rest):
    # Option A: close the block here; the untouched suffix is partitioned
    # on its own.
    for tail in _nc_of(rest[idx:]):
        yield (block,) + done + tail
    # Option B: extend the block with rest[j].  The skipped gap rest[idx:j]
    # is then walled off under the new arc and must be partitioned within
    # itself, which is exactly the non-crossing condition.
    for j in range(idx, len(rest)):
        for gap in _nc_of(rest[idx:j]):
            yield from _grow(block + (rest[j],), j + 1, done + gap, rest)


def count_nc(m: int) -> int:
    """Number of non-crossing partitions of {1..m} (the Catalan number C_m).

    Computed by a scan DP over open-block stack heights rather than by a
    binomial formula, so it independently cross-checks the enumeration: the
    tests assert it equals the stream length of ``iter_nc_blocks``.  State
    f[s] counts prefixes with s blocks still open; placing the next element
    either opens a block (s -> s+1) or joins the block at depth i from the
    top, closing the i blocks above it (s -> s-i for i = 0..s-1).
    """
    if m < 0:
        raise ValueError("ground set size must be non-negative")
    f = [1]
    for _ in range(m):
        g = [0] * (len(f) + 1)
        for s, c in enumerate(f):
            if not c:
                continue
            g[s + 1] += c
            for target in range(1, s + 1):
                g[target] += c
        f = g
    return sum(f)


def y_level_histogram(m: int) -> list[int]:
    """Level histogram of the odd-separating partitions of {1..m}.

    Counts non-crossing partitions in which no block contains two odd
    elements and every block without an odd element has even size.  Entry
    r of the result counts those with exactly r such even-only blocks
    (equivalently block count ceil(m/2) + r).  The trailing entry is
    nonzero; for m = 8 the histogram is [112, 41, 2].

    Implemented as a depth-first scan over the open-block stack with two
    prunes: an odd element never joins a block that already holds an odd,
    and a block is refused closure while even-only with odd size.
    """
    if m < 1:
        raise ValueError("ground set size must be positive")
    n_odd = (m + 1) // 2
    hist: dict[int, int] = {}
    stack: list[list[int]] = []  # open blocks as [size, has_odd]

    def closable(entry):
        return entry[1] or entry[0] % 2 == 0

    def rec(e, closed):
        if e > m:
            for entry in stack:
                if not closable(entry):
                    return
            level = closed + len(stack) - n_odd
            hist[level] = hist.get(level, 0) + 1
            return
        odd = e % 2
        # open a fresh block
        stack.append([1, odd])
        rec(e + 1, closed)
        stack.pop()
        # or join the block at depth i, closing everything above it
        k = len(stack)
        for i in range(k - 1, -1, -1):
            if i < k - 1 and not closable(stack[i + 1]):
                # a block that cannot close blocks every deeper join too
                return
            size, has_odd = stack[i]
            if odd and has_odd:
                continue
            removed = stack[i + 1 :]
            del stack[i + 1 :]
            stack[i][0] = size + 1
            stack[i][1] = has_odd or odd
            rec(e + 1, closed + len(removed))
            stack[i][0] = size
            stack[i][1] = has_odd
            stack.extend(removed)

    rec(1, 0)
    if not hist:
        return []
    return [hist.get(r, 0) for r in range(max(hist) + 1)]


def word_profile_counts(
    m: int, colors: tuple[int, ...]
) -> dict[tuple[tuple[int, int], ...], int]:
    """Group the monochromatic non-crossing partitions of a colored word.

    ``colors`` assigns each position 1..m a color.  A partition is kept
    when every block is single-colored (it refines the kernel of the color
    word).  Rather than yielding each survivor, returns a dict mapping
    profile -> count, where a profile is the sorted tuple of (color, size)
    pairs of the blocks.  Summing a product of per-block cumulants over the
    survivors only ever needs these multiplicities, since such a product
    depends on the partition through its profile alone.

    No block size is pruned: profiles whose cumulant factors happen to
    vanish for some spec are still counted, and the caller multiplies them
    by zero.  The kernel stays value-agnostic.
    """
    if m < 0:
        raise ValueError("word length must be non-negative")
    if len(colors) != m:
        raise ValueError("colors must assign one color per position")
    out: dict[tuple[tuple[int, int], ...], int] = {}
    stack: list[list[int]] = []  # open blocks as [color, size]
    finished: list[tuple[int, int]] = []

    def rec(e):
        if e > m:
            prof = tuple(sorted(finished + [(c, s) for c, s in stack]))
            out[prof] = out.get(prof, 0) + 1
            return
        c = colors[e - 1]
        stack.append([c, 1])
        rec(e + 1)
        stack.pop()
        k = len(stack)
        for i in range(k - 1, -1, -1):
            if stack[i][0] != c:
                continue
            removed = stack[i + 1 :]
            del stack[i + 1 :]
            for col, size in removed:
                finished.append((col, size))
            stack[i][1] += 1
            rec(e + 1)
            stack[i][1] -= 1
            if removed:
                del finished[-len(removed) :]
            stack.extend(removed)

    rec(1)
    return out
