"""Detection and outage metrics along the warden's threshold axis.

The warden compares its long-run average received power to a threshold
zeta.  Below the noise floor it always alarms (false alarm probability 1);
above it, detection trades off against missed detection.  The covertness
outage probability COP = 1 - (P_FA + P_MD) is the warden's success
probability, maximal just above the noise floor at zeta* = sigma_w^2 + mu.
"""

import numpy as np

from covertfas import (
    LinkBudget,
    NodeFas,
    PortGrid,
    covert_outage_prob,
    db_to_linear,
    dbm_to_watts,
    false_alarm_prob,
    miss_detection_prob,
    optimal_threshold,
    outage_prob,
    success_prob,
)

link = LinkBudget(
    p_a=dbm_to_watts(20.0),          # 20 dBm
    sigma2_w=db_to_linear(0.0),      # 0 dB
    sigma2_b=db_to_linear(-20.0),    # -20 dB
    r_b=0.5,
    mu=0.01,
)
fas = NodeFas(PortGrid(2, 2, 1.0, 1.0), nu=40.0)
fpa = NodeFas(PortGrid(1, 1, 0.0, 0.0), nu=40.0)

print(f"optimal threshold zeta* = {optimal_threshold(link)}")
print("\n zeta    P_FA   P_MD(fas)  COP(fas)  COP(fpa)")
for zeta in (0.8, 1.0, 1.01, 1.1, 1.3, 1.6, 2.5, 4.0):
    md = miss_detection_prob(link, fas, zeta)
    cop = covert_outage_prob(link, fas, zeta)
    cop1 = covert_outage_prob(link, fpa, zeta)
    print(
        f" {zeta:4.2f}   {false_alarm_prob(link, zeta):4.1f}   "
        f"{md.value:9.5f}  {cop.value:8.5f}  {cop1.value:8.5f}"
    )
print("(the port-rich warden keeps COP higher everywhere above the floor)")

# The receiver side: outage falls as power rises, faster with more ports.
print("\n P_a[dBm]  P_out(fas)   P_out(fpa)   P_suc(fas/fas)")
for dbm in (-10.0, 0.0, 6.0, 12.0, 20.0, 30.0):
    probe = LinkBudget(dbm_to_watts(dbm), link.sigma2_w, link.sigma2_b, link.r_b, link.mu)
    out_fas = outage_prob(probe, fas)
    out_fpa = outage_prob(probe, fpa)
    suc = success_prob(probe, fas, fas)
    print(f" {dbm:8.1f}  {out_fas.value:10.3e}  {out_fpa.value:10.3e}  {suc.value:10.3e}")
print("(success peaks at moderate power: strong enough for the receiver,")
print(" quiet enough to stay under the warden's threshold)")
