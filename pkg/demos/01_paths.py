# Passage times and low-optimal paths on a small hand-made field.
import numpy as np

from lppdom.fixtures import load_fixture
from lppdom.lpp import enumerate_optimal_paths, low_optimal_path, passage_times

field = load_fixture("E")
print("weights, top row is y = 2:")
print(np.flipud(field.weights.T))

g = passage_times(field)
print("\npassage times:")
print(np.flipud(g.g.T))

# the DP answer agrees with brute force over every up-right path
z = (2, 2)
print("\nlow-optimal path to", z, "->", list(low_optimal_path(field, z)))
print("all optimal paths:", [list(p) for p in enumerate_optimal_paths(field, z)])

# on a constant field every path ties; the low-optimal rule hugs the x-axis
flat = load_fixture("C")
print("\nconstant field, optimal paths to (2,2):", len(enumerate_optimal_paths(flat, (2, 2))))
print("low-optimal choice:", list(low_optimal_path(flat, (2, 2))))
