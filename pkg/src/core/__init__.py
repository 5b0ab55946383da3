from .clock import SimClock, frame_length, to_ms

__all__ = ["SimClock", "frame_length", "to_ms"]
