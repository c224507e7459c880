# The tree of low-optimal paths, its subtrees and the blue/red competition colouring.
from lppdom.tree import build_forest, competition_coloring, diagonal_profile, subtree_offsets
from lppdom.weights import DistributionSpec, SiteWindow, sample_field

field = sample_field(DistributionSpec.exponential(1), SiteWindow(30, 30), seed=3)
forest = build_forest(field)

st = subtree_offsets(forest, (1, 1))
prof = diagonal_profile(st)
print("subtree at (1,1):", st.card, "sites")
print("sites per anti-diagonal:", prof.alpha[:12], "...")

col = competition_coloring(forest, (0, 0))
blue, red = col.sites("blue"), col.sites("red")
print(f"colouring from the origin: {len(blue)} blue, {len(red)} red, "
      f"{field.window.n_sites - len(blue) - len(red)} neutral")

# crude text picture, y grows upward
glyph = {"blue": "b", "red": ".", "neutral": " "}
for y in range(field.window.ny, -1, -1):
    print("".join(glyph[col[(x, y)]] for x in range(field.window.nx + 1)))
