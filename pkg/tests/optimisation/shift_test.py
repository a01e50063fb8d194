import math
import unittest

import numpy as np

from lbboost.optimisation import LossContext, TrainingMask
from lbboost.optimisation import shift_loss, optimize_shift, ShiftWalk, smooth_shift_loss, optimize_smooth_shift

def make_partition(fg_H, bg_H, b, fg_f = None, bg_f = None):
    """
    one-row image: the object pixels first, then the background pixels, no don't care
    """
    fg_H, bg_H = np.asarray(fg_H, dtype = float), np.asarray(bg_H, dtype = float)
    fg_f = np.zeros(len(fg_H)) if fg_f is None else np.asarray(fg_f, dtype = float)
    bg_f = np.zeros(len(bg_H)) if bg_f is None else np.asarray(bg_f, dtype = float)
    width = len(fg_H) + len(bg_H)
    mask = TrainingMask(width, 1, [(i, 0) for i in range(len(fg_H))], rho = 0, b = b)
    context = LossContext.single(np.concatenate([fg_H, bg_H])[None, :], mask)
    return context.partition(np.concatenate([fg_f, bg_f]))

def grid_shift_loss(fg_H, bg_H, b, grid):
    V = np.sum(np.exp(-fg_H))
    hinge = np.maximum(0.0, np.expm1(bg_H[None, :] - grid[:, None])).sum(axis = 1)
    return V * np.exp(grid) + b * hinge

class TestOptimizeShift(unittest.TestCase):

    def test_no_false_negatives(self):
        s, loss = optimize_shift(make_partition([], [0.5, 1.2], b = 1.0))
        self.assertEqual((s, loss), (1.2, 0.0))

    def test_nothing_to_shift(self):
        s, loss = optimize_shift(make_partition([0.0], [0.0], b = 1.0))
        self.assertEqual(s, 0.0)
        self.assertAlmostEqual(loss, 1.0)

    def test_interior_minimum(self):
        s, loss = optimize_shift(make_partition([0.0], [2.0], b = 1.0))
        self.assertAlmostEqual(s, 1.0)
        self.assertAlmostEqual(loss, 2 * math.e - 1)

    def test_discount_moves_the_minimum(self):
        s, loss = optimize_shift(make_partition([0.0], [2.0], b = 0.25))
        # e^2s = b e^2 with b = 1/4
        self.assertAlmostEqual(s, 1.0 - math.log(2))
        self.assertAlmostEqual(loss, shift_loss(make_partition([0.0], [2.0], b = 0.25), s))

    def test_empty_background(self):
        s, loss = optimize_shift(make_partition([0.3, -0.2], [], b = 1.0))
        self.assertEqual(s, 0.0)
        self.assertAlmostEqual(loss, math.exp(-0.3) + math.exp(0.2))

    def test_zero_loss_when_no_objects_are_missed(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            bg_H = rng.uniform(-3, 3, size = rng.integers(1, 30))
            s, loss = optimize_shift(make_partition([], bg_H, b = 0.1))
            self.assertEqual(loss, 0.0)
            self.assertEqual(s, max(0.0, bg_H.max()))

    def test_grid_oracle(self):
        rng = np.random.default_rng(2024)
        grid = np.arange(0, 60001) * 1e-4
        for _ in range(200):
            fg_H = rng.uniform(-3, 3, size = rng.integers(0, 21))
            bg_H = rng.uniform(-3, 3, size = rng.integers(1, 51))
            b = float(rng.choice([0.01, 0.1, 1.0]))
            s, loss = optimize_shift(make_partition(fg_H, bg_H, b))
            self.assertGreaterEqual(s, 0.0)

            points = np.union1d(grid, bg_H[bg_H > 0])
            oracle = grid_shift_loss(fg_H, bg_H, b, points).min()
            scale = max(1.0, oracle)
            self.assertLessEqual(loss, oracle + 1e-9 * scale)
            self.assertGreaterEqual(loss, oracle - 1e-6 * scale)
            self.assertAlmostEqual(loss, grid_shift_loss(fg_H, bg_H, b, np.array([s]))[0], delta = 1e-9 * scale)

class TestShiftWalk(unittest.TestCase):

    def test_follows_the_exact_minimiser(self):
        rng = np.random.default_rng(31)
        for _ in range(200):
            n_fg, n_bg = int(rng.integers(0, 6)), int(rng.integers(1, 40))
            fg_H = rng.uniform(-2, 2, n_fg)
            # repeated values: removing a pixel only lowers a multiplicity
            bg_H = np.round(rng.uniform(-2, 3, n_bg), 1)
            b = float(rng.choice([0.01, 0.1, 1.0]))
            context = make_partition(fg_H, bg_H, b).context
            walk = ShiftWalk(context)
            f = np.zeros(n_fg + n_bg)
            for chunk in np.array_split(rng.permutation(n_fg + n_bg), 5):
                f[chunk] = 1.0
                walk.remove(chunk[chunk >= n_fg])
                partition = context.partition(f)
                s, loss = walk.minimize(partition.V)
                expected_s, expected_loss = optimize_shift(partition)
                self.assertAlmostEqual(s, expected_s, delta = 1e-9 * max(1.0, expected_s))
                self.assertAlmostEqual(loss, expected_loss, delta = 1e-9 * max(1.0, expected_loss))

    def test_walks_back_when_objects_are_found(self):
        # the optimum moves up and then down again as V shrinks
        context = make_partition([0.0, 0.0], [0.5, 1.0, 2.0, 3.0], b = 1.0).context
        walk = ShiftWalk(context)
        s_high, _ = walk.minimize(0.01)
        s_low, _ = walk.minimize(100.0)
        self.assertGreater(s_high, s_low)
        self.assertEqual(s_low, 0.0)
        s, loss = walk.minimize(0.0)
        self.assertEqual((s, loss), (3.0, 0.0))

class TestSmoothShift(unittest.TestCase):

    def test_closed_form(self):
        partition = make_partition([0.0], [1.0, 1.0], b = 0.5)
        s, loss = optimize_smooth_shift(partition, 10.0)
        self.assertAlmostEqual(s, 0.5 * math.log(0.5 * 2 * math.e))
        grid = np.linspace(0, 10, 10001)
        self.assertLessEqual(loss, min(smooth_shift_loss(partition, g) for g in grid) + 1e-9)

    def test_cap(self):
        s, loss = optimize_smooth_shift(make_partition([], [1.0], b = 1.0), 4.0)
        self.assertEqual(s, 4.0)
        self.assertAlmostEqual(loss, math.exp(1 - 4))

    def test_empty_background(self):
        s, loss = optimize_smooth_shift(make_partition([0.5], [], b = 1.0), 4.0)
        self.assertEqual(s, 0.0)
        self.assertAlmostEqual(loss, math.exp(-0.5))

if __name__ == '__main__':
    unittest.main()
