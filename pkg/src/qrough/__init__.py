"""Unsupervised fire segmentation with Q-rough sets and a fire threat index."""

__version__ = "0.1.0"

from .agent import (
    AgentConfig, FireModel, FrameSegmentation, NoFireModel, QTable, q_pair, refine, reward,
    segment_frame, state_key,
)
from .colorspace import (
    FrameStats, YCrCbPixel, frame_stats, rgb_fire_mask, rgb_to_ycrcb, ycrcb_array, ycrcb_fire_mask,
)
from .evaluation import (
    EvalMetrics, NoRegion, SynthScenario, aggregate_metrics, bbox_of, corner_rmse, pixel_metrics,
    synth_sequence,
)
from .frame_io import (
    FrameBuffer, FrameIOError, FrameReport, load_sequence, read_mask, read_report, write_mask,
    write_report,
)
from .granulation import GranulatedFrame, Granule, build_adjacency, granulate
from .pipeline import segment_sequence, track_threat
from .rough_core import (
    RoughApproximation, approximate_fire, granule_mask, lower_approximation, upper_approximation,
)
from .threat import AlarmPolicy, ThreatTracker, alarm, choose_p
