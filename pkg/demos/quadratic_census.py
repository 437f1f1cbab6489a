"""How many distinct quadratic fields appear as Q(sqrt t) for small t?

The family Y^2 = T has Galois group C2.  We specialize T at integers with a
discriminant budget y, keep the specializations whose group is certified to be
C2, and count the distinct fields that come out.  The count should beat y^(1/4).
"""

from hilbcount import c2_model, count_fields

model = c2_model()
print(f"model {model.P.to_str()} = 0, discriminant degree {model.delta_P}")
for k in (3, 4, 5):
    y = 10**k
    rep = count_fields(model, y, 2)
    t = rep.totals
    print(f"y = 10^{k}: enumerated {t.enumerated}, certified {t.certified}, "
          f"distinct fields {rep.distinct} (y^(1/4) = {y ** 0.25:.1f})")
    if rep.exponent_fit is not None:
        print(f"  fitted growth exponent {rep.exponent_fit:.3f}, target {rep.target_exponent:.3f}")

print("\nsmallest few fields by |disc| among the last run:")
for rec in rep.ordered_records()[:6]:
    print(f"  t0 = {rec.t0}  |N(disc)| = {rec.disc_norm}")
