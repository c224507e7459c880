# Translating a field to an anchor a and correcting its axes so that passage
# times, and the subtree hanging off a + (1,1), are carried over unchanged.
import numpy as np

from lppdom.events import in_omega_upper
from lppdom.surgery import (build_config_a, random_condeps_eps, satisfies_condeps, verify_inclusion,
                            verify_length_conjugacy, verify_subtree_shift)
from lppdom.weights import DistributionSpec, SiteWindow, sample_field

field = sample_field(DistributionSpec.geometric(0.5), SiteWindow(12, 12), seed=11, scale=1)
a = (3, 2)
s = build_config_a(field, a)
print("anchor", a, "in the upper event:", in_omega_upper(field, a))
print("axis correction: e00 =", s.eps.e00, " ex =", s.eps.ex[:5], " ey =", s.eps.ey[:5])
print("passage times carried over:", verify_length_conjugacy(s))
print("subtree carried over:      ", verify_subtree_shift(s))
if in_omega_upper(field, a):
    print("corrections next to the anchor vanish, cross conditions hold:", satisfies_condeps(s.eps))

# adding weight on the axes (under the cross conditions) can only shrink T_(1,1)
rng = np.random.default_rng(0)
ok = sum(verify_inclusion(field, random_condeps_eps(field.window, rng), "thm2") for _ in range(200))
print(f"inclusion held for {ok}/200 random axis perturbations")
