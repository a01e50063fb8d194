from dataclasses import dataclass, asdict
from enum import Enum

import numpy as np

from ..utils.errors import FeatureError

class FeatureKind(str, Enum):
    HaarTwoRect       = 'HaarTwoRect'
    HaarThreeRect     = 'HaarThreeRect'
    HaarCheckerboard  = 'HaarCheckerboard'
    BoxSmooth         = 'BoxSmooth'
    GradientMagnitude = 'GradientMagnitude'

    @property
    def is_haar(self) -> bool:
        return self.value.startswith('Haar')

class Grammar(str, Enum):
    Rich     = 'Rich'
    HaarOnly = 'HaarOnly'

    @classmethod
    def parse(cls, value: 'Grammar | str') -> 'Grammar':
        if isinstance(value, Grammar):
            return value
        aliases = {'rich': cls.Rich, 'haar': cls.HaarOnly, 'haaronly': cls.HaarOnly}
        try:
            return aliases[str(value).lower()]
        except KeyError:
            raise FeatureError(f'Unknown grammar {value}, use one of: rich, haar.')

    @property
    def kinds(self) -> list[FeatureKind]:
        if self == Grammar.HaarOnly:
            return [k for k in FeatureKind if k.is_haar]
        return list(FeatureKind)

@dataclass(frozen = True)
class FeatureBounds:
    """
    Ranges the geometry of a random feature is drawn from (inclusive).
    """
    max_cell:  int = 4
    max_scale: int = 3

    def __post_init__(self):
        if self.max_cell < 1 or self.max_scale < 1:
            raise FeatureError(f'Feature bounds must be at least 1, got {self}.')

# cell weights of each kind, horizontal orientation; vertical is the transpose
_CELL_WEIGHTS = {
    FeatureKind.HaarTwoRect:       np.array([[-1, 1]]),
    FeatureKind.HaarThreeRect:     np.array([[-1, 2, -1]]),
    FeatureKind.HaarCheckerboard:  np.array([[1, -1], [-1, 1]]),
    FeatureKind.BoxSmooth:         np.array([[1]]),
    FeatureKind.GradientMagnitude: np.array([[1]]),
}

@dataclass(frozen = True)
class FeatureDescriptor:
    """
    A random image feature.
    Each cell is cell_width x cell_height grid units, a grid unit is `scale` pixels.
    (seed, draw) is the lineage: sample_feature(seed, draw, ...) gives back the same descriptor.
    """
    kind:        FeatureKind
    cell_width:  int
    cell_height: int
    orientation: str = 'h'
    scale:       int = 1
    polarity:    int = 1
    seed:        int = 0
    draw:        int = 0

    def __post_init__(self):
        object.__setattr__(self, 'kind', FeatureKind(self.kind))
        if self.cell_width < 1 or self.cell_height < 1 or self.scale < 1:
            raise FeatureError(f'Feature cells and scale must be positive: {self}.')
        if self.orientation not in ('h', 'v'):
            raise FeatureError(f'Orientation must be h or v, got {self.orientation}.')
        if self.polarity not in (-1, 1):
            raise FeatureError(f'Polarity must be +1 or -1, got {self.polarity}.')

    def __str__(self) -> str:
        return (f'{self.kind.value}(cell={self.cell_width}x{self.cell_height}, {self.orientation}, '
                f'scale={self.scale}, polarity={self.polarity:+d}, lineage={self.seed}/{self.draw})')

    @property
    def weights(self) -> np.ndarray:
        weights = _CELL_WEIGHTS[self.kind]
        return weights.T if self.orientation == 'v' else weights

    @property
    def cell_size(self) -> tuple[int, int]:
        """
        (width, height) of one cell in pixels
        """
        return self.cell_width * self.scale, self.cell_height * self.scale

    @property
    def window(self) -> tuple[int, int]:
        """
        (width, height) of the whole feature window in pixels
        """
        rows, cols = self.weights.shape
        cw, ch = self.cell_size
        return cols * cw, rows * ch

    def to_dict(self) -> dict:
        out = asdict(self)
        out['kind'] = self.kind.value
        return out

    @classmethod
    def from_dict(cls, spec: dict) -> 'FeatureDescriptor':
        try:
            kind = FeatureKind(spec['kind'])
        except ValueError:
            raise FeatureError(f'Unknown feature kind {spec["kind"]}.')
        return cls(kind = kind,
                   cell_width = int(spec['cell_width']), cell_height = int(spec['cell_height']),
                   orientation = str(spec.get('orientation', 'h')), scale = int(spec.get('scale', 1)),
                   polarity = int(spec.get('polarity', 1)),
                   seed = int(spec.get('seed', 0)), draw = int(spec.get('draw', 0)))

def sample_feature(seed: int, draw: int, grammar: Grammar | str = Grammar.Rich,
                   bounds: FeatureBounds = FeatureBounds()) -> FeatureDescriptor:
    """
    Draw a random feature. The draw only depends on (seed, draw, grammar, bounds).
    """
    grammar = Grammar.parse(grammar)
    rng = np.random.default_rng([seed, draw])
    kinds = grammar.kinds
    kind = kinds[int(rng.integers(len(kinds)))]
    return FeatureDescriptor(kind = kind,
                             cell_width  = int(rng.integers(1, bounds.max_cell + 1)),
                             cell_height = int(rng.integers(1, bounds.max_cell + 1)),
                             orientation = 'h' if rng.integers(2) == 0 else 'v',
                             scale       = int(rng.integers(1, bounds.max_scale + 1)),
                             polarity    = 1 if rng.integers(2) == 0 else -1,
                             seed = int(seed), draw = int(draw))
