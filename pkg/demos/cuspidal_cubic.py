"""Counting integral points on the cuspidal cubic X2^2 = X1^3.

Its integral points are (n^2, n^3), so the number with house at most B grows
like B^(1/3).  We count them by brute force over Q and over Q(i), then fit the
growth exponent on a log-log scale.
"""

from hilbcount import NumberField, count_points, fit_slope, parse_poly, theorem_c_rhs

Q = NumberField.rationals()
F = parse_poly("X2^2 - X1^3", Q)

print("Points with max(|x1|, |x2|) <= B on X2^2 = X1^3 over Q")
Bs = [10**2, 10**3, 10**4]
Ns = []
for B in Bs:
    res = count_points(Q, F, B)
    Ns.append(res.count)
    print(f"  B = {B:>6}: N = {res.count:>3}   general upper bound ~ {theorem_c_rhs(F.d, B, 1):.3g}")

print(f"fitted exponent {fit_slope(Bs, Ns):.3f}  (expected about 1/3)")
print("first few points:", [(str(a), str(b)) for a, b in count_points(Q, F, 100).points[:5]])

# Over Gaussian integers the same curve picks up points like (i^2 n^2, ...).
Qi = NumberField([1, 0, 1])
Fi = parse_poly("X2^2 - X1^3", Qi)
res = count_points(Qi, Fi, 30)
print(f"\nOver Q(i) with house <= 30: {res.count} points")
