from .metrics import MatchResult, RocCurve, match, roc, average_precision
