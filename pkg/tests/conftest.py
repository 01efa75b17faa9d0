import numpy as np
import pytest
import torch

from dualsem.losses import BatchEmbeddings, ViewPair


def random_batch(seed: int, n: int, dim: int, dtype=torch.float64) -> BatchEmbeddings:
    """A seeded batch of eight random embedding blocks, safely away from zero."""
    rng = np.random.default_rng(seed)

    def block():
        m = rng.normal(size=(n, dim))
        # keep every row comfortably nonzero
        norms = np.linalg.norm(m, axis=1, keepdims=True)
        m = m / np.maximum(norms, 1e-12)
        return torch.as_tensor(m, dtype=dtype)

    return BatchEmbeddings(
        premise=ViewPair(block(), block()),
        explicit_entailment=ViewPair(block(), block()),
        implied_entailment=ViewPair(block(), block()),
        contradiction=ViewPair(block(), block()),
    )


@pytest.fixture
def make_batch():
    return random_batch
