"""Random SLP corpora shared by the witness unit tests and the acceptance run."""

import random

from kronewton.polysys import Slp, random_slp


def nonzero_corpus(count: int, seed: int, n_inputs: int = 2) -> list[Slp]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        slp = random_slp(rng, rng.randint(1, n_inputs + 1), max_size=12, max_depth=4)
        if not slp.to_multipoly().is_zero():
            out.append(slp)
    return out


def zero_corpus(count: int, seed: int) -> list[Slp]:
    """g*(x+1) - (g*x + g) for random g; identically zero with L <= 12, depth <= 4."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        g = random_slp(rng, rng.randint(1, 3), max_size=10, max_depth=3)
        ins = list(g.instructions)
        out_g = g.output
        x = len(ins)
        ins.append(("input", 0))
        one = len(ins)
        ins.append(("const", 1))
        ins.append(("add", x, one))
        xp1 = len(ins) - 1
        ins.append(("mul", out_g, xp1))
        lhs = len(ins) - 1
        ins.append(("mul", out_g, x))
        gx = len(ins) - 1
        ins.append(("add", gx, out_g))
        ins.append(("sub", lhs, len(ins) - 1))
        slp = Slp(g.n_inputs, tuple(ins))
        if slp.size <= 12 and slp.depth <= 4:
            out.append(slp)
    return out
