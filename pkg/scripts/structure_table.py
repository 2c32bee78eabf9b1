"""Regenerate the frozen N_{a,b} table of liealg from 4x4 matrices.

Prints the dict literal and exits nonzero if it disagrees with the frozen copy.
"""
import sys

import numpy as np

from sp4cyclic import liealg as la


def derive() -> dict:
    B = {r: la.basis_matrices()[la.INDEX[r]] for r in la.ROOTS}
    out = {}
    for p in la.ROOTS:
        for q in la.ROOTS:
            s = (p.a + q.a, p.b + q.b)
            if not la.is_root(*s):
                continue
            c = B[p] @ B[q] - B[q] @ B[p]
            target = B[la.Root(*s)]
            k = np.flatnonzero(target)[0]
            n = c.flat[k] / target.flat[k]
            assert np.allclose(c, n * target)
            out[((p.a, p.b), (q.a, q.b))] = int(round(n.real))
    return out


if __name__ == "__main__":
    table = derive()
    for k, v in table.items():
        print(f"    {k}: {v},")
    frozen = {k: v for k, v in la._N.items()}
    if table != frozen:
        print("MISMATCH with the frozen table", file=sys.stderr)
        sys.exit(1)
    print(f"# {len(table)} entries, matches liealg")
