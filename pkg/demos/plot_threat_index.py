"""
Fire threat index on synthetic scenarios
========================================

A flickering fire stays near zero, a growing fire goes positive, a dying
fire goes negative, and a sudden flashover raises the alarm.
"""

from qrough import AlarmPolicy, SynthScenario, choose_p, synth_sequence, track_threat

fps = 30
p = choose_p(fps)
policy = AlarmPolicy.for_fps(fps, tau=0.2)

curves = {}
for kind in ("flicker", "grow", "shrink", "flashover"):
    frames, _ = synth_sequence(SynthScenario(kind, frames=120))
    reports = [rep for _, _, rep in track_threat(frames, p, policy)]
    curves[kind] = [r.threat for r in reports]
    alarms = [r.frame_index for r in reports if r.alarm]
    print(f"{kind:9s}  final T_F {reports[-1].threat:+.3f}  "
          f"first alarm {alarms[0] if alarms else None}")

try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots(figsize=(7, 3.5))
    for kind, ys in curves.items():
        ax.plot(ys, label=kind)
    ax.axhline(policy.tau, ls="--", c="gray", lw=0.8)
    ax.set_xlabel("frame")
    ax.set_ylabel("T_F")
    ax.legend()
    fig.tight_layout()
    fig.savefig("threat_index.png", dpi=80)
