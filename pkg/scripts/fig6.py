"""Corrupted CFP slots against the number of smart attackers."""
from pathlib import Path

from _common import load, parser
from wbansim.figures import fig6
from wbansim.metrics import emit

args = parser(__doc__).parse_args()
table = fig6(load("fig6", args))
print(f"{'smart':>5}  {'corrupted':>9}  {'std':>7}  {'scheduled':>9}")
for k, agg in table:
    print(f"{k:>5}  {agg.mean('gts_slots_corrupted'):9.1f}  {agg.std('gts_slots_corrupted'):7.1f}  "
          f"{agg.mean('gts_slots_scheduled'):9.1f}")
if args.out:
    Path(args.out).write_bytes(emit(table, "csv", axis="attack.smart.count"))
