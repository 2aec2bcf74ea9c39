"""The cooperative game behind a problem and its Owen value.

v(S) counts the revenue of holders whose every visit lies inside S.  With the
consortia as a priori unions the Owen value reproduces the EE payouts.
"""
import passalloc
from passalloc.games import build_game, owen, shapley
from passalloc.problem import GENERAL
from passalloc.randgen import GenConfig, stream_problems
from passalloc.rules import allocate_ee, shapley_rule
from passalloc.transforms import reduce_problem, restrict

d = passalloc.example1()
v = build_game(d)
for coalition, value in v.items():
    print(f"v({coalition}) = {value}")
print("Owen:", [str(x) for x in owen(v, d.consortia)], " EE:", [str(x) for x in allocate_ee(d)])
print("Shapley (no unions):", [str(x) for x in shapley(v)])

agree = sum(owen(build_game(p), p.consortia) == tuple(allocate_ee(p))
            for p in stream_problems(GenConfig(museums=(1, 8), seed=3), 200))
print(f"Owen = EE on {agree}/200 random problems")

# Only general passes, every museum its own consortium: EE is the Shapley rule.
# Collapsing each consortium of the general-pass part gives exactly such a problem.
r = reduce_problem(restrict(d, GENERAL))
print("reduced problem, EE:", [str(x) for x in allocate_ee(r)], " Shapley rule:", [str(x) for x in shapley_rule(r)])
