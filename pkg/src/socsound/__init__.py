"""Network soundscape monitor: traffic criticality indicators rendered as audio.

Per-tick traffic aggregates (bytes/packets, sent/received) are converted to
log returns whose magnitude tracks relaxation-scale activity; the four
streams drive a four-voice ambient mix, an alert rule, and an offline
wavelet/FFT analysis suite.
"""

from socsound.capture.records import IntervalSample, PacketRecord, ReplaySpec
from socsound.metrics import LogReturnVector, ScalerSpec, log_return, scale

__version__ = "0.1.0"

__all__ = [
    "IntervalSample",
    "PacketRecord",
    "ReplaySpec",
    "LogReturnVector",
    "ScalerSpec",
    "log_return",
    "scale",
    "__version__",
]
