import unittest

import numpy as np

from lbboost.optimisation import PixelLabel, TrainingMask, default_discount
from lbboost.utils.errors import ExtentError

class TestTrainingMask(unittest.TestCase):
    def setUp(self):
        self.mask = TrainingMask(21, 21, [(10, 10)], rho = 7)

    def test_labels(self):
        self.assertEqual(self.mask.labels[10, 10], PixelLabel.Object)
        self.assertEqual(self.mask.labels[16, 10], PixelLabel.DontCare)
        # distance exactly rho is background
        self.assertEqual(self.mask.labels[17, 10], PixelLabel.Background)
        self.assertEqual(self.mask.n_objects, 1)

    def test_default_discount(self):
        self.assertAlmostEqual(self.mask.b, 1 / self.mask.n_background)
        self.assertEqual(default_discount(0, 0), 1.0)
        self.assertEqual(default_discount(3, 12), 0.25)

    def test_centres_stay_objects(self):
        mask = TrainingMask(20, 5, [(5, 2), (8, 2), (8, 2)], rho = 7)
        self.assertEqual(mask.n_objects, 2)
        self.assertEqual(mask.labels[2, 8], PixelLabel.Object)

    def test_no_dont_care(self):
        mask = TrainingMask(4, 3, [(0, 0)], rho = 0)
        self.assertEqual(mask.n_background, 11)

    def test_outside(self):
        with self.assertRaises(ExtentError):
            TrainingMask(10, 10, [(3, 10)])

    def test_invalid(self):
        with self.assertRaises(ValueError):
            TrainingMask(10, 10, [], rho = -1)
        with self.assertRaises(ValueError):
            TrainingMask(10, 10, [], b = 0)

if __name__ == '__main__':
    unittest.main()
