import unittest

import numpy as np

from lbboost.hos import ObjectnessField, ScoredLocation, master_detections
from lbboost.post_processing import ExtractionMethod, ExtractionParams, detect, detect_llm, detect_kde, parameter_grid

def field_from(values: np.ndarray) -> ObjectnessField:
    H = ObjectnessField.zeros(values.shape[1], values.shape[0])
    return ObjectnessField(H.data.copy(data = values.astype(float)))

class TestDetectLLM(unittest.TestCase):
    def setUp(self):
        rng = np.random.default_rng(8)
        self.field = field_from(rng.normal(size = (30, 30)))

    def test_identity_smoothing(self):
        self.assertEqual(detect_llm(self.field, 0, 0.0), master_detections(self.field))

    def test_threshold(self):
        peak = self.field.values.max()
        self.assertEqual(detect_llm(self.field, 0, peak + 1), [])
        counts = [len(detect_llm(self.field, 1, t)) for t in (0.0, 0.1, 0.3, 0.6)]
        self.assertEqual(counts, sorted(counts, reverse = True))

    def test_higher_threshold_keeps_a_subset(self):
        thresholds = np.linspace(-0.5, self.field.values.max() + 0.1, 25)
        for method, radii in ((ExtractionMethod.LLM, (0, 1, 2, 3)), (ExtractionMethod.KDE, (2.0, 4.0))):
            for radius in radii:
                previous = None
                for t in thresholds:
                    params = (ExtractionParams(method, smoothing_radius = radius, threshold = t)
                              if method == ExtractionMethod.LLM else
                              ExtractionParams(method, kde_radius = radius, threshold = t))
                    found = set(detect(self.field, params))
                    if previous is not None:
                        self.assertTrue(found <= previous)
                    self.assertTrue(all(d.c >= t for d in found))
                    previous = found

    def test_merge_close_peaks(self):
        values = np.zeros((9, 9))
        values[4, 3] = values[4, 5] = 1.0
        self.assertEqual(len(detect_llm(values, 0)), 2)
        merged = detect_llm(values, 2)
        self.assertEqual(len(merged), 1)
        self.assertEqual((merged[0].x, merged[0].y), (4, 4))

class TestDetectKDE(unittest.TestCase):

    def test_no_seeds(self):
        self.assertEqual(detect_kde(-np.ones((10, 10)), 3.0), [])

    def test_single_seed(self):
        values = np.zeros((21, 21))
        values[10, 10] = 2.0
        self.assertEqual(detect_kde(values, 4.0), [ScoredLocation(10, 10, 2.0)])

    def test_two_seeds_merge(self):
        values = np.zeros((21, 21))
        values[10, 9] = values[10, 11] = 1.0
        found = detect_kde(values, 5.0)
        self.assertEqual(len(found), 1)
        self.assertEqual((found[0].x, found[0].y), (10, 10))
        self.assertAlmostEqual(found[0].c, 1.92)

class TestExtractionParams(unittest.TestCase):

    def test_validation(self):
        with self.assertRaises(ValueError):
            ExtractionParams(smoothing_radius = -1)
        with self.assertRaises(ValueError):
            ExtractionParams(ExtractionMethod.KDE, kde_radius = 0)
        with self.assertRaises(ValueError):
            ExtractionParams(threshold = float('inf'))

    def test_dict(self):
        params = ExtractionParams('kde', kde_radius = 3.5, threshold = 0.25)
        self.assertEqual(params.method, ExtractionMethod.KDE)
        self.assertEqual(ExtractionParams.from_dict(params.to_dict()), params)
        self.assertEqual(params.with_threshold(1.0).threshold, 1.0)

    def test_grid(self):
        grid = parameter_grid('LLM', range(0, 5))
        self.assertEqual([p.smoothing_radius for p in grid], [0, 1, 2, 3, 4])
        grid = parameter_grid(ExtractionMethod.KDE, [2, 4])
        self.assertEqual([p.kde_radius for p in grid], [2.0, 4.0])

    def test_detect_dispatch(self):
        values = np.zeros((21, 21))
        values[10, 10] = 2.0
        self.assertEqual(detect(values, ExtractionParams('KDE', kde_radius = 3)), detect_kde(values, 3))
        self.assertEqual(detect(values, ExtractionParams()), detect_llm(values))

if __name__ == '__main__':
    unittest.main()
