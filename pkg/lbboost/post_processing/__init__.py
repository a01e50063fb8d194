from .pp_functions import box_smoothing, epanechnikov_kernel, point_density
from .extraction import ExtractionMethod, ExtractionParams, detect_llm, detect_kde, detect, default_radii, parameter_grid
