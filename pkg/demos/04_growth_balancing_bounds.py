"""Growth statistics, balancing classes, and rate-quotient dimension bounds.

The doubling schedule (2^n maps of ratio 4^-n at time n) grows far too fast
for the subexponential theory, but its follower and norm rates are exactly
exponential, so the quotient of the fitted rates pins the dimension at
log2/log4 = 1/2.  The demo also shows how the balancing classifier reads
norm-ratio sequences of different growth.
"""

import math

from bowendim import (
    ab_dimension_bounds,
    balancing_class,
    bowen_dimension,
    build_similarity_system,
    growth_stats,
    hausdorff_measure_trend,
    subexp_diagnostic,
)
from bowendim.bundled import ab_half, cantor3

system = ab_half(horizon=12)
stats = growth_stats(system.schedule)

print("doubling schedule: #I^(n) =", list(stats.counts[:6]), "...")
print("subexponential verdict:", subexp_diagnostic(stats).verdict)

rep = ab_dimension_bounds(system)
print("\nfitted rates:", {k: round(v, 6) for k, v in rep.rates.items()})
print(f"dimension bounds [{rep.lo:.4f}, {rep.hi:.4f}], point estimate {rep.point}")

res = bowen_dimension(system, (0.1, 0.95), n_max=12)
print(f"pressure crossing agrees: [{res.bracket[0]:.6f}, {res.bracket[1]:.6f}]")
print("justification:", res.hypothesis.justification)

print("\nbalancing classes of norm-ratio sequences rho_n (horizon 128):")
for label, ratios in [
    ("constant ratios", [[0.25, 0.25]] * 128),
    ("rho_n = n", [[0.25, 0.25 / (n + 1)] for n in range(128)]),
    ("rho_n = e^sqrt(n)", [[0.25, 0.25 * math.exp(-math.sqrt(n + 1))] for n in range(128)]),
]:
    sys_r = build_similarity_system(ratios, [[0.0, 0.5]] * 128)
    print(f"  {label:20s} -> {balancing_class(sys_r).verdict}")

cantor = cantor3(16)
t_star = math.log(2) / math.log(3)
print("\nHausdorff-measure trend of the middle-thirds set:")
for h in (t_star, t_star + 0.1, t_star - 0.1):
    trend = hausdorff_measure_trend(cantor, h, (2, 14))
    print(f"  h = {h:.4f}: {trend.verdict}")
