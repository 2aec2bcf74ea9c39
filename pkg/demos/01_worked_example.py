"""Three museums, two consortia: the four two-stage rules side by side.

Museums 1 and 2 sell a joint consortium pass; museum 3 is a consortium on its
own.  Everybody also sells individual tickets and there is a general pass.
"""
from fractions import Fraction

import passalloc
from passalloc.problem import derived_indices, revenue
from passalloc.rules import CANONICAL, REMARK, allocate

d = passalloc.example1()
print("museums:", d.m, "consortia:", d.consortia)
print("total revenue E =", revenue(d))

idx = derived_indices(d)
for a in d.holders(0):
    print(f"general-pass holder {a} visits {sorted(idx.visits[a])}, consortia {sorted(idx.general_consortia[a])}")

print("\nrule  payouts")
for rule in CANONICAL:
    print(f"{rule.value:<5} {[str(x) for x in allocate(rule, d)]}")

# The counterexample rules are efficient too, they just break one axiom each.
print("\nremaining rules")
for rule in REMARK:
    a = allocate(rule, d)
    assert a.total == revenue(d)
    print(f"{rule.value:<5} {[str(x) for x in a]}")

# Prices are exact: a cheaper individual ticket shifts PP payouts by thirds and fifths.
from passalloc.transforms import with_price
cheap = with_price(d, -1, Fraction(1, 3))
print("\nPP with museum 1's ticket at 1/3:", [str(x) for x in allocate("pp", cheap)])
