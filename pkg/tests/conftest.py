import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from patclass.footprints import FootprintMatrix  # noqa: E402


@pytest.fixture
def six_graph_matrix():
    """The running six-graph example: three positive graphs (rows 0-2), three
    negative (rows 3-5), and four footprints:

        P0: all positives, no negatives                 (a=3, b=0)
        P1: all positives + two negatives               (a=3, b=2)
        P2: one positive only                           (a=1, b=0)
        P3: two positives + all negatives               (a=2, b=3)
    """
    bits = np.array([
        # P0 P1 P2 P3
        [1, 1, 1, 1],   # G0 +
        [1, 1, 0, 0],   # G1 +
        [1, 1, 0, 1],   # G2 +
        [0, 1, 0, 1],   # G3 -
        [0, 1, 0, 1],   # G4 -
        [0, 0, 0, 1],   # G5 -
    ], dtype=bool)
    labels = [1, 1, 1, -1, -1, -1]
    return FootprintMatrix(bits, labels)
