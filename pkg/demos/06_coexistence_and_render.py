# How far the (1,1) subtree survives in a finite window, and pictures of the tree.
import tempfile
from pathlib import Path

from lppdom.experiments import coexistence_statistics, coexistence_survey
from lppdom.render import render_scene
from lppdom.weights import DistributionSpec, SiteWindow, sample_field

w = SiteWindow(64, 64)
field = sample_field(DistributionSpec.exponential(1), w, seed=1)
prof = coexistence_statistics(field)
print("reach:", prof.reach, "of", prof.edge, " edge ratio:", round(prof.edge_ratio, 4))

s = coexistence_survey("exp:1", w, 1000, seed=2)
print(f"P(reach the far corner) ~ {s['p_reach_edge']:.3f} [{s['ci_low']:.3f}, {s['ci_high']:.3f}]")

out = Path(tempfile.mkdtemp())
small = sample_field(DistributionSpec.exponential(1), SiteWindow(40, 40), seed=4)
(out / "tree.svg").write_bytes(render_scene(small, "forest", "svg"))
(out / "coloring.ppm").write_bytes(render_scene(small, "coloring", "ppm", (0, 0)))
print("wrote", *sorted(p.name for p in out.iterdir()), "to", out)
