import math
import unittest

import numpy as np

from lbboost.optimisation import AlphaOptState, FlatAlphaWalk, LossContext, SortedBreakpoints, TrainingMask
from lbboost.optimisation import alpha_loss, alpha_overestimate, optimize_alpha, optimize_alpha_flat
from lbboost.optimisation import smooth_alpha_loss, smooth_alpha_overestimate, optimize_smooth_alpha

def make_partition(fg_H, fg_f, bg_H, bg_f, b):
    """
    one-row image: the object pixels first, then the background pixels, no don't care
    """
    fg_H, bg_H = np.asarray(fg_H, dtype = float), np.asarray(bg_H, dtype = float)
    width = len(fg_H) + len(bg_H)
    mask = TrainingMask(width, 1, [(i, 0) for i in range(len(fg_H))], rho = 0, b = b)
    context = LossContext.single(np.concatenate([fg_H, bg_H])[None, :], mask)
    return context.partition(np.concatenate([np.asarray(fg_f, dtype = float), np.asarray(bg_f, dtype = float)]))

def brute_overestimate(fg_H, fg_f, bg_H, bg_f, b, alphas):
    a = np.asarray(alphas)[:, None]
    fg = (np.exp(-fg_H) * (1 - fg_f + fg_f * np.exp(-a))).sum(axis = 1)
    with np.errstate(divide = 'ignore'):
        z = -bg_H / bg_f
    active = (bg_H >= 0) | (a > z)
    bg = np.where(active, np.exp(bg_H) * (1 - bg_f + bg_f * np.exp(a)) - 1, 0.0).sum(axis = 1)
    return fg + b * bg

def brute_flat_loss(fg_H, bg_H, b, alphas):
    a = np.asarray(alphas)[:, None]
    fg = np.exp(-(fg_H + a)).sum(axis = 1)
    bg = np.maximum(0.0, np.expm1(bg_H + a)).sum(axis = 1)
    return fg + b * bg

class TestOptimizeAlpha(unittest.TestCase):

    def test_two_hits_one_false_alarm(self):
        partition = make_partition([0.0, 0.0], [1.0, 1.0], [0.0], [1.0], b = 1.0)
        for optimiser in (optimize_alpha, optimize_alpha_flat):
            alpha, loss = optimiser(partition, 10.0)
            self.assertAlmostEqual(alpha, 0.5 * math.log(2))
            self.assertAlmostEqual(loss, 2 * math.sqrt(2) - 1)

    def test_no_false_alarms(self):
        partition = make_partition([0.0], [1.0], [], [], b = 1.0)
        for optimiser in (optimize_alpha, optimize_alpha_flat):
            alpha, loss = optimiser(partition, 10.0)
            self.assertEqual(alpha, 10.0)
            self.assertAlmostEqual(loss, math.exp(-10))

    def test_no_hits(self):
        partition = make_partition([], [], [-1.0, 0.5], [0.5, 1.0], b = 1.0)
        alpha, loss = optimize_alpha(partition, 10.0)
        self.assertEqual(alpha, 0.0)
        self.assertAlmostEqual(loss, alpha_loss(partition, 0.0))

    def test_invalid_alpha_max(self):
        partition = make_partition([0.0], [1.0], [], [], b = 1.0)
        with self.assertRaises(ValueError):
            optimize_alpha(partition, 0.0)
        with self.assertRaises(ValueError):
            optimize_alpha_flat(make_partition([0.0], [0.5], [], [], b = 1.0), 10.0)

    def test_overestimate_dominates(self):
        rng = np.random.default_rng(7)
        alphas = rng.uniform(0, 10, size = 100)
        for _ in range(100):
            n_fg, n_bg = rng.integers(0, 21), rng.integers(0, 51)
            partition = make_partition(rng.uniform(-3, 3, n_fg), 1 - rng.uniform(0, 1, n_fg),
                                       rng.uniform(-3, 3, n_bg), 1 - rng.uniform(0, 1, n_bg),
                                       b = float(rng.choice([0.01, 0.1, 1.0])))
            exact0 = alpha_loss(partition, 0.0)
            self.assertAlmostEqual(alpha_overestimate(partition, 0.0), exact0, delta = 1e-12 * max(1.0, exact0))
            for alpha in alphas:
                exact = alpha_loss(partition, alpha)
                self.assertGreaterEqual(alpha_overestimate(partition, alpha), exact - 1e-12 * max(1.0, exact))

    def test_overestimate_grid_oracle(self):
        rng = np.random.default_rng(5)
        alpha_max = 5.0
        grid = np.linspace(0, alpha_max, 50001)
        for _ in range(200):
            n_fg, n_bg = rng.integers(0, 21), rng.integers(0, 51)
            fg_H, fg_f = rng.uniform(-3, 3, n_fg), 1 - rng.uniform(0, 1, n_fg)
            bg_H, bg_f = rng.uniform(-3, 3, n_bg), 1 - rng.uniform(0, 1, n_bg)
            b = float(rng.choice([0.01, 0.1, 1.0]))
            partition = make_partition(fg_H, fg_f, bg_H, bg_f, b)

            alpha, value = optimize_alpha(partition, alpha_max)
            self.assertTrue(0.0 <= alpha <= alpha_max)
            self.assertAlmostEqual(value, alpha_overestimate(partition, alpha), delta = 1e-9 * max(1.0, value))
            self.assertAlmostEqual(value, brute_overestimate(fg_H, fg_f, bg_H, bg_f, b, [alpha])[0],
                                   delta = 1e-9 * max(1.0, value))

            breakpoints = -bg_H[bg_H < 0] / bg_f[bg_H < 0]
            points = np.union1d(grid, breakpoints[breakpoints < alpha_max])
            oracle = brute_overestimate(fg_H, fg_f, bg_H, bg_f, b, points).min()
            scale = max(1.0, oracle)
            self.assertLessEqual(value, oracle + 1e-9 * scale)
            self.assertGreaterEqual(value, oracle - 1e-6 * scale)

    def test_flat_grid_oracle(self):
        rng = np.random.default_rng(9)
        alpha_max = 10.0
        grid = np.linspace(0, alpha_max, 100001)
        for _ in range(200):
            n_fg, n_bg = rng.integers(0, 21), rng.integers(0, 51)
            fg_H, fg_f = rng.uniform(-3, 3, n_fg), rng.integers(0, 2, n_fg).astype(float)
            bg_H, bg_f = rng.uniform(-3, 3, n_bg), rng.integers(0, 2, n_bg).astype(float)
            b = float(rng.choice([0.01, 0.1, 1.0]))
            partition = make_partition(fg_H, fg_f, bg_H, bg_f, b)

            alpha, loss = optimize_alpha_flat(partition, alpha_max)
            _, bound = optimize_alpha(partition, alpha_max)
            self.assertAlmostEqual(loss, bound, delta = 1e-9 * max(1.0, loss))
            self.assertAlmostEqual(loss, alpha_loss(partition, alpha), delta = 1e-12 * max(1.0, loss))

            hit_H, false_H = fg_H[fg_f == 1], bg_H[bg_f == 1]
            points = np.union1d(grid, -false_H[(false_H < 0) & (-false_H < alpha_max)])
            oracle = brute_flat_loss(hit_H, false_H, b, points).min()
            scale = max(1.0, oracle)
            self.assertLessEqual(loss, oracle + 1e-9 * scale)
            self.assertGreaterEqual(loss, oracle - 1e-6 * scale)

class TestFlatAlphaWalk(unittest.TestCase):

    def test_follows_the_exact_minimiser(self):
        rng = np.random.default_rng(13)
        alpha_max = 10.0
        for _ in range(200):
            n_fg, n_bg = int(rng.integers(0, 8)), int(rng.integers(0, 40))
            fg_H = rng.uniform(-3, 3, n_fg)
            # shared breakpoints
            bg_H = np.round(rng.uniform(-3, 3, n_bg), 1)
            b = float(rng.choice([0.01, 0.1, 1.0]))
            H = np.concatenate([fg_H, bg_H])
            context = make_partition(fg_H, np.zeros(n_fg), bg_H, np.zeros(n_bg), b).context
            walk = FlatAlphaWalk(b, alpha_max)
            f = np.zeros(n_fg + n_bg)
            for chunk in np.array_split(rng.permutation(n_fg + n_bg), 4):
                f[chunk] = 1.0
                walk.add(H[chunk[chunk >= n_fg]])
                partition = context.partition(f)
                alpha, loss = walk.minimize(math.fsum(np.exp(-partition.fg_pos_H)))
                scale = max(1.0, loss)
                self.assertTrue(0.0 <= alpha <= alpha_max)
                self.assertAlmostEqual(loss, alpha_loss(partition, alpha), delta = 1e-9 * scale)
                _, bound = optimize_alpha(partition, alpha_max)
                self.assertAlmostEqual(loss, bound, delta = 1e-9 * scale)

    def test_breakpoints_past_alpha_max_never_count(self):
        walk = FlatAlphaWalk(1.0, 2.0)
        walk.add(np.array([-5.0, -5.0]))
        alpha, loss = walk.minimize(1.0)
        self.assertEqual(alpha, 2.0)
        self.assertAlmostEqual(loss, math.exp(-2.0))

class TestSortedBreakpoints(unittest.TestCase):

    def test_matches_a_fresh_state(self):
        rng = np.random.default_rng(21)
        H = np.round(rng.uniform(-2, 2, 40), 1)
        f = np.zeros(40)
        points = SortedBreakpoints()
        for _ in range(8):
            # evidence only grows, some pixels are hit again
            idx = np.unique(rng.integers(0, 40, 8))
            f[idx] = np.minimum(f[idx] + rng.uniform(0.1, 0.6, len(idx)), 1.0)
            points.update(idx, H[idx], f[idx])

            pos = np.flatnonzero(f > 0)
            expected = AlphaOptState.from_pixels(np.zeros(0), np.zeros(0), H[pos], f[pos])
            state = points.state(0.0, 0.0)
            self.assertEqual(len(points), len(pos))
            self.assertTrue(np.allclose(state.z, expected.z))
            self.assertTrue(np.allclose(state.prefix_weight, expected.prefix_weight, rtol = 1e-12))
            self.assertTrue(np.allclose(state.prefix_constant, expected.prefix_constant, rtol = 1e-12))

class TestSmoothAlpha(unittest.TestCase):

    def test_closed_form(self):
        partition = make_partition([0.0, 0.0], [1.0, 0.5], [0.0], [1.0], b = 0.5)
        alpha, value = optimize_smooth_alpha(partition, 10.0)
        self.assertAlmostEqual(alpha, 0.5 * math.log(1.5 / 0.5))
        self.assertAlmostEqual(value, smooth_alpha_overestimate(partition, alpha))
        for a in np.linspace(0, 10, 101):
            self.assertLessEqual(value, smooth_alpha_overestimate(partition, a) + 1e-12)

    def test_overestimate_dominates(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            n_fg, n_bg = rng.integers(0, 10), rng.integers(0, 10)
            partition = make_partition(rng.uniform(-2, 2, n_fg), 1 - rng.uniform(0, 1, n_fg),
                                       rng.uniform(-2, 2, n_bg), 1 - rng.uniform(0, 1, n_bg), b = 0.2)
            for a in (0.0, 0.3, 2.0, 7.5):
                self.assertGreaterEqual(smooth_alpha_overestimate(partition, a) + 1e-12,
                                        smooth_alpha_loss(partition, a))

    def test_extremes(self):
        self.assertEqual(optimize_smooth_alpha(make_partition([], [], [0.0], [1.0], b = 1.0), 10.0)[0], 0.0)
        self.assertEqual(optimize_smooth_alpha(make_partition([0.0], [1.0], [], [], b = 1.0), 10.0)[0], 10.0)

if __name__ == '__main__':
    unittest.main()
