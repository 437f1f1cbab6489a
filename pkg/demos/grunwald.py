"""Searching for quadratic fields with prescribed local behaviour.

We want Q(sqrt t0) in which 5 splits and 7 is inert.  The search walks outward
in height and returns the first few specializations giving distinct fields,
each re-checked against the requested Frobenius data.
"""

from hilbcount import FrobeniusData, NumberField, c2_model, grunwald_search

Q = NumberField.rationals()
data = FrobeniusData.parse(Q, "5, [1 1]; 7, [2]")
res = grunwald_search(c2_model(), data, max_solutions=4, height_cap=500)
print(f"scanned {res.scanned} candidates up to height {res.height_reached}")
for rec in res:
    t = int(rec.t0.coords[0])
    print(f"  t0 = {t:>4}: t mod 5 = {t % 5}, t mod 7 = {t % 7}")
if res.below_p0:
    print("primes below the guaranteed range:", ", ".join(res.below_p0))
