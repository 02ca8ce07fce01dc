"""Failed GTS request probability against the number of smart attackers."""
from pathlib import Path

from _common import load, parser
from wbansim.figures import fig5
from wbansim.metrics import emit

args = parser(__doc__).parse_args()
table = fig5(load("fig5", args))
print(f"{'smart':>5}  {'P(failed)':>9}  {'std':>6}  {'cap':>6}  {'coll':>6}  {'denied':>6}")
for k, agg in table:
    print(f"{k:>5}  {agg.mean('failed_request_probability'):9.3f}  "
          f"{agg.std('failed_request_probability'):6.3f}  {agg.mean('failed_cap_access'):6.1f}  "
          f"{agg.mean('failed_collision'):6.1f}  {agg.mean('failed_denied'):6.1f}")
if args.out:
    Path(args.out).write_bytes(emit(table, "csv", axis="attack.smart.count"))
