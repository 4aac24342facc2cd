"""Walkthrough: Monte Carlo validation of the exact formulas.

A million killed paths of the diagonal walk, checked against the exact
expected exit time (2), the exact exit-position moments, and the
theoretical survival-tail slope -3/2.  Reports are bit-identical for a
fixed seed, independent of chunk scheduling.
"""

from conewalk import SimConfig, diagonal_walk, sample_exit

cfg = SimConfig(
    walk=diagonal_walk(),
    start=(1, 1),
    paths=1_000_000,
    seed=1,
    max_steps=1_000_000,
    checks=("tau-mean", "exit-position", "harmonicity", "tail"),
)
rep = sample_exit(cfg)
print(f"paths: {rep.paths}, truncated at the step cap: {rep.truncated}")
for c in rep.checks:
    flag = "ok  " if c.passed else "FAIL"
    print(f"  [{flag}] {c.name:16s} estimate {c.estimate:+.5f}  "
          f"target {c.target:+.5f}  z {c.z:+.2f}  {c.note}")
print("all checks passed:", rep.all_passed())
