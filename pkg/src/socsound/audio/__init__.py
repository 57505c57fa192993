from socsound.audio.assets import ASSET_NAMES, AssetError, load_loop
from socsound.audio.engine import (
    AudioEngine,
    ChannelParams,
    EngineConfig,
    MixerState,
    RenderResult,
    VoiceSpec,
    default_voice_specs,
    render_offline,
    soft_clip,
)
from socsound.audio.filters import BandPass, bandpass_coeffs, design_gain
from socsound.audio.sink import AudioDeviceUnavailable, DeviceSink, NullSink, WavFileSink, open_sink
from socsound.audio.voices import LoopVoice, NoiseVoice, SineVoice, make_voice
from socsound.audio.wav import read_wav, write_wav

__all__ = [
    "ASSET_NAMES",
    "AssetError",
    "load_loop",
    "AudioEngine",
    "ChannelParams",
    "EngineConfig",
    "MixerState",
    "RenderResult",
    "VoiceSpec",
    "default_voice_specs",
    "render_offline",
    "soft_clip",
    "BandPass",
    "bandpass_coeffs",
    "design_gain",
    "AudioDeviceUnavailable",
    "DeviceSink",
    "NullSink",
    "WavFileSink",
    "open_sink",
    "LoopVoice",
    "NoiseVoice",
    "SineVoice",
    "make_voice",
    "read_wav",
    "write_wav",
]
