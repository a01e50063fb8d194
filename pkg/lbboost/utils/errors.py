class LBBoostError(ValueError):
    """
    Base class for the errors raised by lbboost.
    It is a ValueError so that code catching invalid values keeps working.
    """

class ExtentError(LBBoostError):
    """
    A location or label falls outside an image, or two rasters do not have the same extent.
    """

class DatasetError(LBBoostError):
    """
    Missing or malformed dataset files (manifest, labels, images), or an infeasible synthetic configuration.
    """

class ModelFormatError(LBBoostError):
    """
    Malformed or truncated model file. The message always names the offending line.
    """
    def __init__(self, line_number: int, message: str) -> None:
        self.line_number = line_number
        super().__init__(f'line {line_number}: {message}')

class FeatureError(LBBoostError):
    """
    Unknown feature kind or a feature window that does not fit in the image.
    """

class OptionsError(LBBoostError):
    """
    Invalid options file or command line flags.
    """
