from bisect import bisect_left
import math

import numpy as np

from .partition import LossPartition, AlphaOptState, breakpoints
from ..utils.sums import RunningSum

def alpha_loss(partition: LossPartition, alpha: float) -> float:
    """
    exact L^a(alpha) = sum over fg+ of e^-(H + alpha f) + b * sum over bg+ of max(0, e^(H + alpha f) - 1)
    """
    fg = math.fsum(np.exp(-(partition.fg_pos_H + alpha * partition.fg_pos_f)))
    bg = partition.bg_pos_H + alpha * partition.bg_pos_f
    return fg + partition.b * math.fsum(np.expm1(bg[bg > 0]))

def alpha_overestimate(partition: LossPartition, alpha: float) -> float:
    """
    L^a with exp(+-alpha f) replaced by 1 - f + f exp(+-alpha); a pixel of bg+ counts once alpha > -H/f.
    Equal to the exact loss at alpha = 0 and never below it.
    """
    state = partition.alpha_state
    return float(_segment_value(state, partition.b, _segment_of(state, alpha), alpha))

def _segment_of(state: AlphaOptState, alpha: float) -> int:
    # cell j is active for alpha > z_j; cell 0 always
    return max(int(np.searchsorted(state.z, alpha, side = 'left')) - 1, 0)

def _segment_value(state: AlphaOptState, b: float, j, alpha):
    return (state.fg_constant + state.fg_weight * np.exp(-alpha)
            + b * (state.prefix_weight[j] * np.exp(alpha) + state.prefix_constant[j]))

def minimize_alpha(state: AlphaOptState, b: float, alpha_max: float) -> tuple[float, float]:
    """
    Minimise the overestimate over [0, alpha_max].
    Within segment j (z_j < alpha <= z_{j+1}) it is convex with minimiser
    1/2 ln(sum_fg+ e^-H f / (b * P_j)), P_j the weight of the active cells.
    The overestimate can jump upward at a breakpoint, so each clamped candidate is
    evaluated with the expression that holds at that point.
    Returns (alpha*, overestimate at alpha*).
    """
    in_range = state.z < alpha_max
    in_range[0] = True
    lower = state.z[in_range]
    upper = np.append(lower[1:], alpha_max)
    j = np.arange(len(lower))
    P = state.prefix_weight[j]

    with np.errstate(divide = 'ignore', invalid = 'ignore'):
        a_hat = 0.5 * np.log(state.fg_weight / (b * P))
    a_hat = np.nan_to_num(a_hat, nan = 0.0)
    a_opt = np.clip(a_hat, lower, upper)

    # at the lower end of a segment its own cell is not active yet
    at_lower = (j > 0) & (a_opt == lower)
    segment = np.where(at_lower, j - 1, j)
    values = _segment_value(state, b, segment, a_opt)

    best = int(np.argmin(values))
    return float(a_opt[best]), float(values[best])

def optimize_alpha(partition: LossPartition, alpha_max: float) -> tuple[float, float]:
    if not alpha_max > 0:
        raise ValueError(f'alpha_max must be positive, got {alpha_max}.')
    return minimize_alpha(partition.alpha_state, partition.b, alpha_max)

class SortedBreakpoints:
    """
    The bg+ pixels of a sweep kept sorted by breakpoint, with e^H f and e^H (1 - f) - 1 alongside.
    Pixels whose evidence changes are taken out and put back at their new place.
    """
    def __init__(self) -> None:
        self.pixel    = np.zeros(0, dtype = np.int64)
        self.z        = np.zeros(0)
        self.weight   = np.zeros(0)
        self.constant = np.zeros(0)

    def __len__(self) -> int:
        return len(self.pixel)

    def update(self, idx: np.ndarray, H: np.ndarray, f: np.ndarray) -> None:
        """
        set the evidence of the bg+ pixels idx (new or already there) to f
        """
        if len(self.pixel) > 0:
            keep = ~np.isin(self.pixel, idx)
            self.pixel, self.z = self.pixel[keep], self.z[keep]
            self.weight, self.constant = self.weight[keep], self.constant[keep]

        z = breakpoints(H, f)
        order = np.argsort(z, kind = 'stable')
        z, e, f = z[order], np.exp(H[order]), f[order]
        at = np.searchsorted(self.z, z, side = 'right')
        self.pixel    = np.insert(self.pixel, at, idx[order])
        self.z        = np.insert(self.z, at, z)
        self.weight   = np.insert(self.weight, at, e * f)
        self.constant = np.insert(self.constant, at, e * (1.0 - f) - 1.0)

    def state(self, fg_weight: float, fg_constant: float) -> AlphaOptState:
        return AlphaOptState.from_sorted(fg_weight, fg_constant, self.z, self.weight, self.constant)

class FlatAlphaWalk:
    """
    Exact alpha optimiser for evidence in {0, 1} over a bg+ that only grows.

    The loss e^-alpha F + b * sum over active bg+ of (e^(H + alpha) - 1) is continuous and convex,
    a pixel being active once alpha > q = max(-H, 0). Only the occupied breakpoints below alpha_max
    are kept, sorted, with their pixel counts; a pointer to the current segment and the weight and
    count of its active pixels carry over from one call to the next.
    """
    def __init__(self, b: float, alpha_max: float) -> None:
        self.b = b
        self.alpha_max = alpha_max
        self.q = [0.0]
        self.count = {0.0: 0}
        self.j = 0
        self.P = RunningSum()
        self.N = 0

    def _weight(self, i: int) -> float:
        # the pixels of a positive breakpoint q all have H = -q
        return self.count[self.q[i]] * math.exp(-self.q[i])

    def add(self, H: np.ndarray) -> None:
        """
        new bg+ pixels with values H
        """
        H = np.asarray(H, dtype = float)
        nonneg = H[H >= 0]
        if len(nonneg) > 0:
            weights = np.exp(nonneg)
            self.P.add(weights)
            self.count[0.0] += len(nonneg)
            self.N += len(nonneg)

        q = -H[(H < 0) & (-H < self.alpha_max)]
        if len(q) == 0:
            return
        qs, counts = np.unique(q, return_counts = True)
        current = self.q[self.j]
        active = qs <= current
        self.P.add(counts[active] * np.exp(-qs[active]))
        self.N += int(np.sum(counts[active]))

        new = []
        for value, n in zip(qs.tolist(), counts.tolist()):
            if value in self.count:
                self.count[value] += n
            else:
                self.count[value] = n
                new.append(value)
        if new:
            self.q = sorted(self.q + new)
            self.j = bisect_left(self.q, current)

    def _upper(self, j: int) -> float:
        return self.q[j + 1] if j + 1 < len(self.q) else self.alpha_max

    def _fits(self, j: int, P: float, F: float) -> bool:
        # the minimiser of segment j is not past its upper end
        if F <= 0:
            return True
        if P <= 0:
            return False
        return math.log(F / (self.b * P)) <= 2 * self._upper(j)

    def minimize(self, F: float) -> tuple[float, float]:
        """
        (alpha*, L^a(alpha*)) for the current bg+, F being sum over fg+ of e^-H
        """
        while self.j > 0 and self._fits(self.j - 1, self.P.value - self._weight(self.j), F):
            self.P.subtract(self._weight(self.j))
            self.N -= self.count[self.q[self.j]]
            self.j -= 1
        while self.j + 1 < len(self.q) and not self._fits(self.j, self.P.value, F):
            self.j += 1
            self.P.add(self._weight(self.j))
            self.N += self.count[self.q[self.j]]

        P = max(self.P.value, 0.0) if self.N > 0 else 0.0
        lower, upper = self.q[self.j], self._upper(self.j)
        if F <= 0:
            alpha = lower
        elif P <= 0:
            alpha = upper
        else:
            alpha = min(max(0.5 * math.log(F / (self.b * P)), lower), upper)
        return alpha, F * math.exp(-alpha) + self.b * (P * math.exp(alpha) - self.N)

def optimize_alpha_flat(partition: LossPartition, alpha_max: float) -> tuple[float, float]:
    """
    Exact minimiser of L^a for evidence in {0, 1}, with the exact loss at the minimiser.
    """
    if not alpha_max > 0:
        raise ValueError(f'alpha_max must be positive, got {alpha_max}.')
    for f in (partition.fg_pos_f, partition.bg_pos_f):
        if len(f) > 0 and not np.all(f == 1):
            raise ValueError('Flat alpha optimisation needs evidence values in {0, 1}.')

    walk = FlatAlphaWalk(partition.b, alpha_max)
    walk.add(partition.bg_pos_H)
    a, _ = walk.minimize(math.fsum(np.exp(-partition.fg_pos_H)))
    return a, alpha_loss(partition, a)

def smooth_alpha_overestimate(partition: LossPartition, alpha: float) -> float:
    """
    overestimate of sum over fg+ of e^-(H + alpha f) + b * sum over bg+ of e^(H + alpha f)
    """
    return _smooth_value(*_smooth_sums(partition), partition.b, alpha)

def _smooth_sums(partition: LossPartition) -> tuple[float, float, float, float]:
    fg_exp = np.exp(-partition.fg_pos_H)
    bg_exp = np.exp(partition.bg_pos_H)
    f_fg, f_bg = partition.fg_pos_f, partition.bg_pos_f
    return (math.fsum(fg_exp * f_fg), math.fsum(fg_exp * (1 - f_fg)),
            math.fsum(bg_exp * f_bg), math.fsum(bg_exp * (1 - f_bg)))

def _smooth_value(G: float, fg_constant: float, W: float, bg_constant: float, b: float, alpha: float) -> float:
    return fg_constant + G * math.exp(-alpha) + b * (bg_constant + W * math.exp(alpha))

def minimize_smooth_alpha(G: float, fg_constant: float, W: float, bg_constant: float,
                          b: float, alpha_max: float) -> tuple[float, float]:
    """
    G = sum over fg+ of e^-H f, W = sum over bg+ of e^H f; the constants hold the (1 - f) parts
    """
    if G == 0:
        alpha = 0.0
    elif W == 0:
        alpha = alpha_max
    else:
        alpha = min(max(0.5 * math.log(G / (b * W)), 0.0), alpha_max)
    return alpha, _smooth_value(G, fg_constant, W, bg_constant, b, alpha)

def optimize_smooth_alpha(partition: LossPartition, alpha_max: float) -> tuple[float, float]:
    if not alpha_max > 0:
        raise ValueError(f'alpha_max must be positive, got {alpha_max}.')
    return minimize_smooth_alpha(*_smooth_sums(partition), partition.b, alpha_max)

def smooth_alpha_loss(partition: LossPartition, alpha: float) -> float:
    """
    exact sum over fg+ of e^-(H + alpha f) + b * sum over bg+ of e^(H + alpha f)
    """
    fg = math.fsum(np.exp(-(partition.fg_pos_H + alpha * partition.fg_pos_f)))
    bg = math.fsum(np.exp(partition.bg_pos_H + alpha * partition.bg_pos_f))
    return fg + partition.b * bg
