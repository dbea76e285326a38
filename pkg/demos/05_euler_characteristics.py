"""Euler characteristics of base loci by truncated series arithmetic.

The Euler characteristic of the smooth base locus of a degree-d pencil
is the coefficient of the top monomial in the total Chern class divided
by the square of the normal-bundle factor.  Carrying d symbolically
gives an exact polynomial, evaluated here against the built-in fixtures.
"""

from lefschetz.chern import CHERN_DATA, chern_suite, chi_delta
from lefschetz.models import builtin_pencils

chi = chi_delta((1, 4, 6, 4), 1, 3)
print(f"base-locus Euler characteristic on P^3: chi(d) = {chi}")
for d in (1, 2, 3):
    print(f"  chi({d}) = {chi(d)}")

print("\nagainst the built-in pencil models:")
for p in builtin_pencils():
    coeffs, deg_x, d = CHERN_DATA[p.name]
    chi = chi_delta(coeffs, deg_x, 3)
    euler = sum((-1) ** i * p.delta.dims[i]
                for i in range(p.delta.top + 1))
    print(f"  {p.name}: chi(d) = {chi}; chi({d}) = {chi(d)}; "
          f"model alternating sum = {euler}")

rep = chern_suite()
print(f"\nfull series suite: {'all pass' if rep.ok else 'FAILURES'} "
      f"({len(rep.checks)} checks)")
