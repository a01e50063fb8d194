from .descriptor import FeatureKind, Grammar, FeatureBounds, FeatureDescriptor, sample_feature
from .response import integral_image, rect_sum, box_sums, response_map, to_detector, feature_detections
