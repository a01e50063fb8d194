from functools import cached_property
from typing import Optional, Sequence
import math

import numpy as np

from .mask import TrainingMask, PixelLabel, default_discount
from ..hos.kernel import EvidenceField
from ..hos.objectness import ObjectnessField
from ..utils.errors import ExtentError
from ..utils.sums import compensated_cumsum, compensated_suffix_sum

class LossContext:
    """
    The masked pixels of a training set (one or more images) flattened into a single index space,
    with the current value of the master hypothesis H on each of them.

    Don't care pixels get index -1 and never appear in any loss.
    The background pixels with H > 0 are also kept sorted by H, so that the shift
    optimiser state for any subset of them can be read off without sorting again.
    """
    def __init__(self, fields: Sequence[ObjectnessField | np.ndarray], masks: Sequence[TrainingMask],
                 b: Optional[float] = None) -> None:
        if len(fields) != len(masks):
            raise ValueError(f'Got {len(fields)} fields for {len(masks)} masks.')

        self.index = []
        H_parts, obj_parts = [], []
        offset = 0
        for field, mask in zip(fields, masks):
            values = field.values if isinstance(field, ObjectnessField) else np.asarray(field, dtype = float)
            if values.shape != mask.labels.shape:
                raise ExtentError(f'Field shape {values.shape} does not match the mask shape {mask.labels.shape}.')
            keep = mask.labels != PixelLabel.DontCare
            index = np.full(values.shape, -1, dtype = np.int64)
            n_keep = int(np.count_nonzero(keep))
            index[keep] = np.arange(offset, offset + n_keep)
            offset += n_keep
            self.index.append(index)
            H_parts.append(values[keep])
            obj_parts.append(mask.labels[keep] == PixelLabel.Object)

        self.H         = np.concatenate(H_parts) if H_parts else np.zeros(0)
        self.is_object = np.concatenate(obj_parts) if obj_parts else np.zeros(0, dtype = bool)
        self.object_idx     = np.flatnonzero(self.is_object)
        self.background_idx = np.flatnonzero(~self.is_object)

        if b is None:
            b = default_discount(len(self.object_idx), len(self.background_idx))
        if not b > 0:
            raise ValueError(f'The background discount must be positive, got {b}.')
        self.b = float(b)

        bg_H = self.H[self.background_idx]
        positive = bg_H > 0
        order = np.argsort(bg_H[positive], kind = 'stable')
        self.kpos_idx = self.background_idx[positive][order]
        self.kpos_H   = self.H[self.kpos_idx]

    @classmethod
    def single(cls, field: ObjectnessField | np.ndarray, mask: TrainingMask) -> 'LossContext':
        return cls([field], [mask], mask.b)

    @property
    def size(self) -> int:
        return len(self.H)

    @cached_property
    def exp_H(self) -> np.ndarray:
        return np.exp(self.H)

    @cached_property
    def exp_neg_H(self) -> np.ndarray:
        return np.exp(-self.H)

    @cached_property
    def background_exp_total(self) -> float:
        return math.fsum(self.exp_H[self.background_idx])

    @cached_property
    def shift_cells(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        (k, m, cell): distinct positive background values of H with their multiplicities,
        and for every flat pixel the position of its value in k (-1 if it has none)
        """
        state = ShiftOptState.from_sorted(self.kpos_H)
        cell = np.full(self.size, -1, dtype = np.int64)
        cell[self.kpos_idx] = np.searchsorted(state.k, self.kpos_H)
        return state.k, state.m, cell

    def flatten_evidence(self, evidence: Sequence[EvidenceField]) -> np.ndarray:
        """
        evidence of each image mapped to the flat index space
        """
        if len(evidence) != len(self.index):
            raise ValueError(f'Got {len(evidence)} evidence fields for {len(self.index)} images.')
        f = np.zeros(self.size)
        for field, index in zip(evidence, self.index):
            if field.shape != index.shape:
                raise ExtentError(f'Evidence shape {field.shape} does not match the image shape {index.shape}.')
            idx = index[field.ys, field.xs]
            keep = idx >= 0
            f[idx[keep]] = field.values[keep]
        return f

    def partition(self, f: np.ndarray) -> 'LossPartition':
        """
        build the four sets from scratch, given the evidence on every flat pixel
        """
        positive = f > 0
        fg_pos = self.object_idx[positive[self.object_idx]]
        bg_pos = self.background_idx[positive[self.background_idx]]
        return LossPartition(self, fg_pos, f[fg_pos], bg_pos, f[bg_pos], positive)

class ShiftOptState:
    """
    Distinct positive values k_1 < ... < k_n of H over bg0 with their multiplicities m_i,
    and the suffix sums sum_{i>=j} m_i e^{k_i} and sum_{i>=j} m_i (last entry is 0).
    Values k <= 0 are left out: for s >= 0 their hinge is never active.
    """
    def __init__(self, k: np.ndarray, m: np.ndarray) -> None:
        self.k = k
        self.m = m
        self.suffix_exp   = compensated_suffix_sum(m * np.exp(k))
        self.suffix_count = np.append(np.cumsum(m[::-1])[::-1], 0)

    @classmethod
    def from_sorted(cls, values: np.ndarray) -> 'ShiftOptState':
        """
        values must be sorted ascending and positive
        """
        if len(values) == 0:
            return cls(np.zeros(0), np.zeros(0, dtype = np.int64))
        starts = np.concatenate([[0], np.flatnonzero(np.diff(values)) + 1])
        counts = np.diff(np.append(starts, len(values)))
        return cls(values[starts], counts)

    @classmethod
    def from_values(cls, values: np.ndarray) -> 'ShiftOptState':
        values = np.asarray(values, dtype = float)
        return cls.from_sorted(np.sort(values[values > 0]))

    def __len__(self) -> int:
        return len(self.k)

class AlphaOptState:
    """
    Breakpoints of the alpha loss over bg+: z = -H/f. Cell A_0 holds the pixels with H >= 0
    (active for any alpha > 0), cells A_1..A_n the pixels sharing each distinct positive z,
    in increasing order. Prefix sums over the cells give, for each segment, the sums needed by
    the overestimate: sum e^H f and sum (e^H (1 - f) - 1).
    """
    def __init__(self, fg_weight: float, fg_constant: float, z: np.ndarray,
                 prefix_weight: np.ndarray, prefix_constant: np.ndarray) -> None:
        self.fg_weight   = fg_weight    # sum e^-H f
        self.fg_constant = fg_constant  # sum e^-H (1 - f)
        self.z = z
        self.prefix_weight   = prefix_weight
        self.prefix_constant = prefix_constant

    @classmethod
    def from_pixels(cls, fg_H: np.ndarray, fg_f: np.ndarray, bg_H: np.ndarray, bg_f: np.ndarray) -> 'AlphaOptState':
        fg_exp = np.exp(-fg_H)
        z = breakpoints(bg_H, bg_f)
        order = np.argsort(z, kind = 'stable')
        bg_exp = np.exp(bg_H[order])
        f = bg_f[order]
        return cls.from_sorted(math.fsum(fg_exp * fg_f), math.fsum(fg_exp * (1.0 - fg_f)),
                               z[order], bg_exp * f, bg_exp * (1.0 - f) - 1.0)

    @classmethod
    def from_sorted(cls, fg_weight: float, fg_constant: float, z: np.ndarray,
                    weight: np.ndarray, constant: np.ndarray) -> 'AlphaOptState':
        """
        z sorted ascending, weight = e^H f and constant = e^H (1 - f) - 1 of the same pixels
        """
        if len(z) == 0:
            return cls(fg_weight, fg_constant, np.zeros(1), np.zeros(1), np.zeros(1))
        # last pixel of every distinct breakpoint
        ends = np.append(np.flatnonzero(np.diff(z)), len(z) - 1)
        cells = z[ends]
        prefix_weight   = compensated_cumsum(weight)[ends]
        prefix_constant = compensated_cumsum(constant)[ends]
        if cells[0] > 0:
            # make sure A_0 exists, even if empty
            cells = np.concatenate([[0.0], cells])
            prefix_weight   = np.concatenate([[0.0], prefix_weight])
            prefix_constant = np.concatenate([[0.0], prefix_constant])
        return cls(fg_weight, fg_constant, cells, prefix_weight, prefix_constant)

def breakpoints(H: np.ndarray, f: np.ndarray) -> np.ndarray:
    """
    -H/f for the pixels with H < 0, 0 for the others
    """
    with np.errstate(divide = 'ignore', invalid = 'ignore'):
        z = -H / f
    return np.where(H >= 0, 0.0, z)

class LossPartition:
    """
    The masked pixels split by object/background and by positive/zero evidence of a candidate:
    fg+, bg+ (with their H and f), fg0 (with H) and bg0 (through its shift optimiser state).
    All indices refer to the flat index space of the context.
    """
    def __init__(self, context: LossContext,
                 fg_pos: np.ndarray, fg_pos_f: np.ndarray,
                 bg_pos: np.ndarray, bg_pos_f: np.ndarray,
                 positive: np.ndarray) -> None:
        self.context  = context
        self.fg_pos   = fg_pos
        self.fg_pos_f = fg_pos_f
        self.bg_pos   = bg_pos
        self.bg_pos_f = bg_pos_f
        self.fg_pos_H = context.H[fg_pos]
        self.bg_pos_H = context.H[bg_pos]
        self.fg_zero  = context.object_idx[~positive[context.object_idx]]
        self.fg_zero_H = context.H[self.fg_zero]
        self.bg_zero_count = len(context.background_idx) - len(bg_pos)
        # the sorted positive background values stay sorted once the bg+ pixels are masked out
        self.shift_state = ShiftOptState.from_sorted(context.kpos_H[~positive[context.kpos_idx]])
        self._positive = positive

    @cached_property
    def V(self) -> float:
        return math.fsum(self.context.exp_neg_H[self.fg_zero])

    @cached_property
    def bg_zero(self) -> np.ndarray:
        bg = self.context.background_idx
        return bg[~self._positive[bg]]

    @cached_property
    def bg_zero_exp_sum(self) -> float:
        return math.fsum(self.context.exp_H[self.bg_zero])

    @cached_property
    def alpha_state(self) -> AlphaOptState:
        return AlphaOptState.from_pixels(self.fg_pos_H, self.fg_pos_f, self.bg_pos_H, self.bg_pos_f)

    @property
    def b(self) -> float:
        return self.context.b

    def counts(self) -> dict[str, int]:
        return {'fg+': len(self.fg_pos), 'bg+': len(self.bg_pos),
                'fg0': len(self.fg_zero), 'bg0': self.bg_zero_count}

def build_partition(H: ObjectnessField | np.ndarray, f: EvidenceField, mask: TrainingMask) -> LossPartition:
    """
    partition of a single image for the evidence field f of a candidate
    """
    context = LossContext.single(H, mask)
    return context.partition(context.flatten_evidence([f]))
