from socsound.service.config import DEFAULT_LISTEN, LISTEN_ENV_VAR, ConfigError, SessionConfig, load_config
from socsound.service.server import ConsoleServer, parse_listen
from socsound.service.session import (
    OfflineResult,
    Session,
    SessionSource,
    compute_returns,
    load_samples,
    load_session_config,
    run_offline,
    write_telemetry,
)
from socsound.service.telemetry import (
    SessionLogWriter,
    TelemetryFrame,
    TelemetryHub,
    is_session_log,
    read_session_log,
)

__all__ = [
    "DEFAULT_LISTEN",
    "LISTEN_ENV_VAR",
    "ConfigError",
    "SessionConfig",
    "load_config",
    "ConsoleServer",
    "parse_listen",
    "OfflineResult",
    "Session",
    "SessionSource",
    "compute_returns",
    "load_samples",
    "load_session_config",
    "run_offline",
    "write_telemetry",
    "SessionLogWriter",
    "TelemetryFrame",
    "TelemetryHub",
    "is_session_log",
    "read_session_log",
]
