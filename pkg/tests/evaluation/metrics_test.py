import unittest

import numpy as np

from lbboost.evaluation import match, roc, average_precision
from lbboost.hos import ScoredLocation
from lbboost.utils.errors import DatasetError

class TestMatch(unittest.TestCase):

    def test_on_centre(self):
        result = match([ScoredLocation(5, 5, 1.0)], [(5, 5)], 10)
        self.assertEqual((result.n_tp, result.n_fp), (1, 0))
        self.assertTrue(result.found.all())

    def test_duplicate_is_false_positive(self):
        result = match([ScoredLocation(5, 5, 1.0), ScoredLocation(7, 5, 0.8)], [(5, 5)], 10)
        self.assertEqual(result.is_tp.tolist(), [True, False])

    def test_distance_exactly_delta(self):
        self.assertEqual(match([ScoredLocation(10, 0, 1.0)], [(0, 0)], 10).n_tp, 0)
        self.assertEqual(match([ScoredLocation(6, 8, 1.0)], [(0, 0)], 10).n_tp, 0)
        self.assertEqual(match([ScoredLocation(6, 7, 1.0)], [(0, 0)], 10).n_tp, 1)

    def test_claims_nearest(self):
        result = match([ScoredLocation(4, 0, 1.0), ScoredLocation(0, 0, 0.5)], [(0, 0), (6, 0)], 10)
        self.assertEqual(result.is_tp.tolist(), [True, True])
        self.assertEqual(result.found.tolist(), [True, True])

    def test_confidence_order(self):
        result = match([ScoredLocation(7, 5, 0.2), ScoredLocation(5, 5, 0.9)], [(5, 5)], 10)
        self.assertEqual([(d.x, d.y) for d in result.detections], [(5, 5), (7, 5)])
        self.assertEqual(result.is_tp.tolist(), [True, False])

class TestRoc(unittest.TestCase):
    def setUp(self):
        self.truth = [[(10, 10), (50, 50)]]
        # TP, FP, FP, TP, FP in confidence order
        self.detections = [[ScoredLocation(10, 10, 0.9), ScoredLocation(30, 30, 0.8), ScoredLocation(90, 10, 0.7),
                            ScoredLocation(50, 50, 0.6), ScoredLocation(90, 90, 0.5)]]

    def test_toy_curve(self):
        curve = roc(self.detections, self.truth, 10, 2.0)
        self.assertEqual(curve.points, [(0.0, 0.0), (0.0, 0.5), (0.5, 0.5), (1.0, 0.5), (1.0, 1.0), (1.5, 1.0)])
        self.assertEqual(curve.thresholds.tolist(), [np.inf, 0.9, 0.8, 0.7, 0.6, 0.5])
        self.assertAlmostEqual(curve.area, 0.75)
        self.assertEqual(curve.detection_rate_at(1.0), 1.0)
        self.assertEqual(curve.detection_rate_at(0.9), 0.5)

    def test_truncation(self):
        curve = roc(self.detections, self.truth, 10, 1.0)
        self.assertEqual(curve.points[-1], (1.0, 1.0))
        self.assertAlmostEqual(curve.area, 0.5)

    def test_toy_average_precision(self):
        self.assertAlmostEqual(average_precision(self.detections, self.truth, 10), 0.5 + 0.5 * 0.5)

    def test_perfect_detector(self):
        detections = [[ScoredLocation(10, 10, 0.9), ScoredLocation(50, 50, 0.4)]]
        self.assertAlmostEqual(roc(detections, self.truth).area, 1.0)
        self.assertAlmostEqual(average_precision(detections, self.truth), 1.0)

    def test_empty_and_false_detections(self):
        curve = roc([[]], self.truth)
        self.assertEqual(curve.points, [(0.0, 0.0)])
        self.assertEqual(curve.area, 0.0)
        self.assertEqual(average_precision([[ScoredLocation(90, 90, 1.0)]], self.truth), 0.0)

    def test_pooled_over_images(self):
        truth = [[(5, 5)], [(5, 5)]]
        detections = [[ScoredLocation(5, 5, 0.3)], [ScoredLocation(5, 5, 0.7), ScoredLocation(40, 40, 0.5)]]
        curve = roc(detections, truth)
        self.assertEqual(curve.points, [(0.0, 0.0), (0.0, 0.5), (0.5, 0.5), (0.5, 1.0)])

    def test_equal_confidences_share_a_point(self):
        detections = [[ScoredLocation(10, 10, 0.5), ScoredLocation(90, 90, 0.5)]]
        curve = roc(detections, self.truth)
        self.assertEqual(curve.points, [(0.0, 0.0), (0.5, 0.5)])

    def test_no_objects(self):
        with self.assertRaises(DatasetError):
            roc([[ScoredLocation(1, 1, 1.0)]], [[]])
        with self.assertRaises(DatasetError):
            average_precision([[]], [[]])

if __name__ == '__main__':
    unittest.main()
