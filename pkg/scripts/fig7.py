"""Bandwidth utilization decrease for smart(2), random(2) and weak(1) attackers."""
import csv
import statistics

from _common import load, parser
from wbansim.figures import FIG7_ROSTER, fig7

args = parser(__doc__).parse_args()
r = fig7(load("fig7", args))
print(f"{'class':>7}  {'mean':>6}  {'std':>6}  {'min':>6}  {'max':>6}")
for kind, count in FIG7_ROSTER:
    v = r.decrease[kind]
    sd = statistics.stdev(v) if len(v) > 1 else 0.0
    print(f"{kind + f'({count})':>7}  {r.mean(kind):6.3f}  {sd:6.3f}  {min(v):6.3f}  {max(v):6.3f}")
ordered = all(s > x > w for s, x, w in zip(*(r.decrease[k] for k, _ in FIG7_ROSTER)))
print(f"smart > random > weak on every replication: {ordered}")
if args.out:
    with open(args.out, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["replication"] + [k for k, _ in FIG7_ROSTER])
        for i, row in enumerate(zip(*(r.decrease[k] for k, _ in FIG7_ROSTER))):
            w.writerow([i] + [f"{x:.6f}" for x in row])
