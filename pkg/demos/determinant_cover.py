"""A determinant-method cover of the integral points on two plane curves.

For each curve we build auxiliary polynomials, one per residue class of points
modulo a prime, that vanish on every integral point of bounded height in that
class.  The report states how many polynomials were needed and checks that
none of them is a multiple of the curve.
"""

from hilbcount import NumberField, detmethod_cover, parse_poly

Q = NumberField.rationals()

for text in ("X2^2 - X1^3", "X2^2 - 2*X1^2 - 1"):
    F = parse_poly(text, Q)
    rep = detmethod_cover(Q, F, 100)
    print(f"curve {text} = 0, B = 100")
    print(f"  degree bound D = {rep.D}, monomials E = {rep.E}, anchor monomial {rep.anchor}")
    print(f"  prime P = {rep.P}, p-adic precision r = {rep.r}, regime {rep.regime}")
    print(f"  auxiliary polynomials k = {rep.k}, largest rank {rep.max_rank} of {rep.E}")
    print(f"  every point covered: {rep.coverage_ok}; coprime to F: {rep.coprimality_ok}")
    print(f"  integral points found: {rep.points}")
    for note in rep.diagnostics:
        print("  note:", note)
    print()
