"""Generate the synthetic telemetry scenario and look at its regimes.

The stream has two segments. The first (SFD) holds gradual soft-failure
episodes: receiver OSNR ramps down, dwells briefly below the eventual
failure plateau (all still labeled normal), then the sustained failure sets
in. The second (HFD) drops the whole OSNR regime and adds abrupt, deeper
failure episodes with no warning ramp.
"""

import numpy as np

from driftstream import Label, Segment, SynthConfig, generate_synthetic, write_csv

cfg = SynthConfig(n_sfd=4000, n_hfd=2000, sfd_episodes=3, hfd_episodes=4)
stream = generate_synthetic(cfg, seed=42)

print(f"total events: {len(stream)}")
for segment in (Segment.SFD, Segment.HFD):
    events = [e for e in stream if e.segment is segment]
    failures = [e for e in events if e.label is Label.FAILURE]
    print(f"{segment.value}: {len(events)} events, {len(failures)} failures "
          f"({100 * len(failures) / len(events):.1f}%)")

# the ordering that makes the drift scenario meaningful:
# hard failures sit deepest, soft failures in between, normal on top
def mean_osnr(predicate):
    return float(np.mean([e.osnr_rx for e in stream if predicate(e)]))

soft = mean_osnr(lambda e: e.segment is Segment.SFD and e.label is Label.FAILURE)
hard = mean_osnr(lambda e: e.segment is Segment.HFD and e.label is Label.FAILURE)
normal = mean_osnr(lambda e: e.label is Label.NORMAL)
print(f"\nmean receiver OSNR (dB): normal {normal:.2f} > soft failure {soft:.2f} "
      f"> hard failure {hard:.2f}")

# BER rides a steep waterfall of OSNR, so the two are strongly anti-correlated
ber = np.array([e.ber_rx for e in stream])
osnr = np.array([e.osnr_rx for e in stream])
print(f"corr(ber_rx, osnr_rx) = {np.corrcoef(ber, osnr)[0, 1]:+.3f}")
print(f"ber_rx spans [{ber.min():.2e}, {ber.max():.2e}]")

# the same stream can be materialized for file-based runs
write_csv([e for e in stream if e.segment is Segment.SFD], "demo_sfd.csv")
write_csv([e for e in stream if e.segment is Segment.HFD], "demo_hfd.csv")
print("\nwrote demo_sfd.csv and demo_hfd.csv")
