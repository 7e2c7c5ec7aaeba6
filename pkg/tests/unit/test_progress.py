"""
Unit tests for ordered parallel mapping.
"""

import sys
import time
from pathlib import Path

import pytest  # type: ignore[import-untyped]

sys.path.insert(0, str(Path(__file__).parent.parent.parent / "src"))

from progress import ordered_map


def _slow_square(x):
    # later items finish first
    time.sleep(0.01 * (5 - x))
    return x * x


class TestOrderedMap:
    """Test ordering, workers and error propagation."""

    def test_inline(self):
        assert ordered_map(lambda x: x + 1, [1, 2, 3]) == [2, 3, 4]

    def test_threads_keep_input_order(self):
        assert ordered_map(_slow_square, range(5), workers=4) == [0, 1, 4, 9, 16]

    def test_empty(self):
        assert ordered_map(_slow_square, [], workers=3) == []

    def test_progress_bar_does_not_change_results(self):
        assert ordered_map(_slow_square, range(3), show_progress=True, desc="squares") == [0, 1, 4]

    @pytest.mark.parametrize("workers", [1, 3])
    def test_exception_propagates(self, workers):
        def fail_on_two(x):
            if x == 2:
                raise ValueError("two")
            return x

        with pytest.raises(ValueError, match="two"):
            ordered_map(fail_on_two, range(4), workers=workers)
