import numpy as np

# Traffic streams use the user index as stream id; baselines get ids above 2**32.
SALOHA_STREAM_ID = 2**32
PIMA_STREAM_ID = 2**32 + 1


def rng_fork(seed: int, stream_id: int) -> np.random.Generator:
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(stream_id),))
    return np.random.Generator(np.random.PCG64(sequence))
