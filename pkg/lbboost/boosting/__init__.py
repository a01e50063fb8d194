from .ensemble import Ensemble
from .lbboost import LBBoost, TrainConfig, IterationRecord, train, validate
from .experiments import Variant, Score, Comparison, DEFAULT_VARIANTS, score, score_by_members
