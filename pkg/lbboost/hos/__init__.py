from .kernel import CorrelationKernel, KernelShape, EvidenceMode, EvidenceField, kernel_value, evidence, evidence_field
from .hypothesis import ScoredLocation, HosHypothesis, filter_at_threshold, hos_apply, sort_detections
from .objectness import ObjectnessField, accumulate, master_detections
