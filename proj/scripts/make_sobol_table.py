"""Regenerate data/sobol_directions.txt.

Writes the classic direction-number table format, one line per dimension:

    d s a m_1 ... m_s

where s is the degree of the primitive polynomial, a encodes its interior
coefficient bits, and m_i are the initial direction integers. Dimension 1
(van der Corput) needs no table entry. Values come from scipy's bundled
Joe-Kuo "new-joe-kuo-6" data, so any build of scipy can reproduce the file.
"""
import sys

import numpy as np
from scipy.stats import _sobol

MAX_DIM = 50

def main(path):
    poly = _sobol.get_poly_vinit("poly", np.uint32)
    vinit = _sobol.get_poly_vinit("vinit", np.uint32)
    lines = ["d s a m_i"]
    for dim in range(2, MAX_DIM + 1):
        p = int(poly[dim - 1])
        s = p.bit_length() - 1
        a = (p >> 1) & ((1 << (s - 1)) - 1)
        m = [int(vinit[dim - 1][k]) for k in range(s)]
        assert all(v > 0 and v % 2 == 1 and v < (1 << (k + 1)) for k, v in enumerate(m))
        lines.append(" ".join(str(v) for v in [dim, s, a] + m))
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")
    print(f"wrote {path}: dims 2..{MAX_DIM}")

if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/sobol_directions.txt")
