"""Unscrambled Sobol' points from scipy (Joe-Kuo new-6 table, Gray-code order)."""
import numpy as np
from scipy.stats import qmc

if __name__ == "__main__":
    pts = qmc.Sobol(d=6, scramble=False).random(8)
    for row in pts:
        print("    {" + ", ".join(repr(float(v)) for v in row) + "},")
    far = qmc.Sobol(d=1111, scramble=False).random(1024)
    print("row 1000, dims 1105..1110:", [repr(float(v)) for v in far[1000, 1105:]])
