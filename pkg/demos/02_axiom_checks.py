"""Checking axioms one instance at a time.

Every checker returns a result with a status; a failure carries a witness
that embeds the problem file, so it can be replayed later.
"""
import json

import passalloc
from passalloc.axioms import (
    check_composition,
    check_splitting_consortia,
    check_splitting_museums,
    check_symmetry_between,
    replay,
)
from passalloc.transforms import ConsortiumSplitSpec, MuseumSplitSpec, split_holders

d = passalloc.example1()

# Splitting the sales period in two does not change EE payouts.
first, second = split_holders(d, {5, 7, 9})
print("EE composition:", check_composition("ee", first, second).status)

# Museum 2 splits into two entities priced 1 and 1.  PP keeps museums 1 and 3 whole.
spec = MuseumSplitSpec(target=2, piece_prices=(1, 1))
print("PP museum split:", check_splitting_museums("pp", d, spec).status)
res = check_splitting_museums("ee", d, spec)
print("EE museum split:", res.status, "before", res.witness["lhs"] if res.failed else "", "after",
      res.witness["rhs"] if res.failed else "")

# Consortium 2 duplicates itself with pass prices 2 and 1.
print("PP consortium split:", check_splitting_consortia("pp", d, ConsortiumSplitSpec(2, (2, 1))).status)

# Consortia 1 and 2 are not symmetric here, so the check does not apply.
print("symmetry between 1 and 2:", check_symmetry_between("ee", d, 1, 2).reason)

if res.failed:
    text = json.dumps(res.witness)
    print("replayed witness:", replay(json.loads(text)).status)
