# Replicate-by-replicate audit of the two subtree comparisons, with coupled
# estimates: each field contributes to both sides, so no failure means lhs <= rhs exactly.
from lppdom.experiments import Theorem, report_from_run, run_audits
from lppdom.weights import SiteWindow

theorems = [Theorem.thm2((3, 2)), Theorem.thm3(3)]
preds = ["card:5", "diag:15"]
run = run_audits(theorems, preds, "geom:0.5", SiteWindow(48, 48), replicates=2000, seed=7, scale=1)

for t, th in enumerate(theorems):
    for k, pred in enumerate(preds):
        rep = report_from_run(run, t, k)
        print(f"{str(th):14s} {pred:8s} failures={rep.counts['violations']} "
              f"lhs={rep.p_hat['lhs']:.4f} [{rep.ci_low['lhs']:.4f}, {rep.ci_high['lhs']:.4f}]  "
              f"rhs={rep.p_hat['rhs']:.4f} [{rep.ci_low['rhs']:.4f}, {rep.ci_high['rhs']:.4f}]")
