import math
import unittest

import numpy as np

from lbboost.utils.sums import RunningSum, compensated_cumsum, compensated_suffix_sum

class TestCompensatedCumsum(unittest.TestCase):

    def test_small_terms_survive(self):
        x = np.array([1e16, 1.0, -1e16, 1.0])
        self.assertEqual(np.cumsum(x)[2:].tolist(), [0.0, 1.0])
        self.assertEqual(compensated_cumsum(x)[2:].tolist(), [1.0, 2.0])

    def test_matches_fsum(self):
        rng = np.random.default_rng(3)
        x = rng.standard_normal(500) * 10.0 ** rng.integers(-8, 9, 500)
        prefix = compensated_cumsum(x)
        for i in (0, 10, 250, 499):
            expected = math.fsum(x[:i + 1])
            self.assertAlmostEqual(prefix[i], expected, delta = 1e-12 * max(1.0, abs(expected)))

    def test_short(self):
        self.assertEqual(compensated_cumsum(np.zeros(0)).tolist(), [])
        self.assertEqual(compensated_cumsum([2.5]).tolist(), [2.5])

    def test_suffix(self):
        self.assertEqual(compensated_suffix_sum([1.0, 2.0, 3.0]).tolist(), [6.0, 5.0, 3.0, 0.0])
        self.assertEqual(compensated_suffix_sum([]).tolist(), [0.0])

class TestRunningSum(unittest.TestCase):

    def test_add_and_remove(self):
        total = RunningSum()
        total.add(1e16)
        total.add(1.0)
        total.subtract(1e16)
        self.assertEqual(total.value, 1.0)

    def test_arrays(self):
        values = np.full(1000, 0.1)
        total = RunningSum.of(values)
        self.assertEqual(total.value, math.fsum(values))
        total.subtract(values[:999])
        self.assertAlmostEqual(float(total), 0.1, delta = 1e-17)
        total.add([])
        self.assertAlmostEqual(float(total), 0.1, delta = 1e-17)

if __name__ == '__main__':
    unittest.main()
