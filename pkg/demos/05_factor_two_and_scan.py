# The factor-two comparison for anchors on the x-axis, and the (conjectural)
# decrease of m -> P(T_(m,1) in A, axis event at m).
from lppdom.experiments import factor_two_experiment, monotonicity_scan
from lppdom.weights import SiteWindow

w = SiteWindow(24, 24)
for m in (1, 2, 3):
    r = factor_two_experiment(m, "card:3", "exp:1", w, 5000, seed=5)
    print(f"m={m}: lhs={r.p_hat['lhs']:.4f}  2*rhs={r.extra['two_rhs']:.4f}  "
          f"identity violations={r.counts['identity_violations']}")

scan = monotonicity_scan("card:3", "exp:1", w, range(1, 6), 5000, seed=6)
print("\nscan status:", scan.status)
for c in scan.curve:
    print(f"  m={c['m']}  p={c['p_hat']:.4f}  [{c['ci_low']:.4f}, {c['ci_high']:.4f}]")
print("flagged increases:", scan.flags)
