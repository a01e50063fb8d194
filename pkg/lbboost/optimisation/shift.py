import math

import numpy as np

from .partition import LossContext, LossPartition, ShiftOptState
from ..utils.sums import RunningSum

def shift_loss(partition: LossPartition, s: float) -> float:
    """
    L^s(s) = V e^s + b * sum over bg0 of max(0, e^(H - s) - 1)
    """
    return _shift_loss(partition.shift_state, partition.V, partition.b, s)

def _shift_loss(state: ShiftOptState, V: float, b: float, s: float) -> float:
    active = state.k > s
    hinge = math.fsum(state.m[active] * np.expm1(state.k[active] - s))
    return V * math.exp(s) + b * hinge

def _clamped_minimiser(V: float, S: float, b: float, lower: float, upper: float) -> float:
    # minimiser of V e^s + b e^-s S within [lower, upper]
    if S <= 0:
        return lower
    return min(max(0.5 * math.log(b * S / V), lower), upper)

def optimize_shift(partition: LossPartition) -> tuple[float, float]:
    """
    Exact minimiser of the shift loss over s >= 0.
    Between two consecutive positive values of H on bg0 the loss is V e^s + b e^-s S_j - b C_j
    (S_j, C_j: suffix sums of m e^k and m), whose minimiser 1/2 ln(b S_j / V) is clamped into the segment.
    Returns (s*, L^s(s*)).
    """
    state, V, b = partition.shift_state, partition.V, partition.b
    n = len(state)

    if V == 0:
        # no false negatives: shifting past every background value makes the loss vanish
        s = float(state.k[-1]) if n > 0 else 0.0
        return s, 0.0

    lower = np.concatenate([[0.0], state.k])
    upper = np.append(state.k, np.inf)
    S = state.suffix_exp
    C = state.suffix_count

    with np.errstate(divide = 'ignore'):
        s_hat = 0.5 * np.log(b * S / V)
    s_opt = np.clip(s_hat, lower, upper)
    losses = V * np.exp(s_opt) + b * (np.exp(-s_opt) * S - C)

    best = int(np.argmin(losses))
    s = float(s_opt[best])
    return s, _shift_loss(state, V, b, s)

class ShiftWalk:
    """
    Shift optimiser for a bg0 that only loses pixels, as the threshold goes down.

    The distinct positive background values k of the context are fixed; removing a pixel lowers the
    multiplicity of its value. The loss is convex in s, so its minimum lies in the first segment
    whose own minimiser is not past the segment end. The segment pointer starts from where the
    previous call left it and the suffix sums S_j, C_j are kept for the current segment only.
    """
    def __init__(self, context: LossContext) -> None:
        k, m, self.cell = context.shift_cells
        self.k = k
        self.exp_k = np.exp(k)
        self.m = m.astype(np.int64).copy()
        self.b = context.b
        self.j = 0
        self.S = RunningSum.of(self.m * self.exp_k)
        self.C = int(np.sum(self.m))
        self.top = len(k) - 1

    def remove(self, idx: np.ndarray) -> None:
        """
        take the background pixels idx out of bg0 (pixels with H <= 0 are ignored)
        """
        cells = self.cell[idx]
        cells, counts = np.unique(cells[cells >= 0], return_counts = True)
        if len(cells) == 0:
            return
        before = self.m[cells] * self.exp_k[cells]
        self.m[cells] -= counts
        after = self.m[cells] * self.exp_k[cells]

        active = cells >= self.j
        if np.any(active):
            self.S.add(np.concatenate([after[active], -before[active]]))
            self.C -= int(np.sum(counts[active]))
        while self.top >= 0 and self.m[self.top] == 0:
            self.top -= 1

    def _weight(self, i: int) -> float:
        return float(self.m[i] * self.exp_k[i])

    def _fits(self, j: int, S: float, V: float) -> bool:
        # the minimiser of segment j is not past its upper end k_j
        return j == len(self.k) or S <= 0 or math.log(self.b * S / V) <= 2 * self.k[j]

    def minimize(self, V: float) -> tuple[float, float]:
        """
        (s*, L^s(s*)) for the current bg0, V being sum over fg0 of e^-H
        """
        if V == 0:
            return (float(self.k[self.top]) if self.top >= 0 else 0.0), 0.0

        while self.j > 0 and self._fits(self.j - 1, self.S.value + self._weight(self.j - 1), V):
            self.j -= 1
            self.S.add(self._weight(self.j))
            self.C += int(self.m[self.j])
        while not self._fits(self.j, self.S.value, V):
            self.S.subtract(self._weight(self.j))
            self.C -= int(self.m[self.j])
            self.j += 1

        S = max(self.S.value, 0.0) if self.C > 0 else 0.0
        lower = float(self.k[self.j - 1]) if self.j > 0 else 0.0
        upper = float(self.k[self.j]) if self.j < len(self.k) else math.inf
        s = _clamped_minimiser(V, S, self.b, lower, upper)
        return s, V * math.exp(s) + self.b * (math.exp(-s) * S - self.C)

def smooth_shift_loss(partition: LossPartition, s: float) -> float:
    """
    V e^s + b e^-s * sum over bg0 of e^H
    """
    return partition.V * math.exp(s) + partition.b * math.exp(-s) * partition.bg_zero_exp_sum

def minimize_smooth_shift(V: float, E: float, b: float, s_max: float) -> tuple[float, float]:
    """
    minimiser of V e^s + b e^-s E over [0, s_max], with its value
    """
    if E == 0:
        s = 0.0
    elif V == 0:
        s = s_max
    else:
        s = min(max(0.5 * math.log(b * E / V), 0.0), s_max)
    return s, V * math.exp(s) + b * math.exp(-s) * E

def optimize_smooth_shift(partition: LossPartition, s_max: float) -> tuple[float, float]:
    return minimize_smooth_shift(partition.V, partition.bg_zero_exp_sum, partition.b, s_max)
