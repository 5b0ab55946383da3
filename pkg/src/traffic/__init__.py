from .generator import ArrivalBatch, TrafficSource, draw_arrivals
from .rng import PIMA_STREAM_ID, SALOHA_STREAM_ID, rng_fork

__all__ = [
    "ArrivalBatch",
    "TrafficSource",
    "draw_arrivals",
    "rng_fork",
    "PIMA_STREAM_ID",
    "SALOHA_STREAM_ID",
]
