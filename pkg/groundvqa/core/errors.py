"""Custom error definitions."""

class GroundVQAError(Exception):
    """Base class for custom errors."""

class NoDataError(GroundVQAError):
    """Error for if data is missing."""

class DataError(GroundVQAError):
    """Error for if there is a problem with the data."""

class GeometryError(DataError):
    """Error for invalid box geometry, such as a zero-area box."""

class SamplingError(GroundVQAError):
    """Error for frame indices that are inconsistent with the sampling schedule."""

class AnnotationError(DataError):
    """Error for malformed annotation or prediction files."""

class VocabularyError(DataError):
    """Error for answers that are outside of the closed answer vocabulary."""

class PromptError(GroundVQAError):
    """Error for if a prompt can not be composed."""

class SceneError(GroundVQAError):
    """Error for if a synthetic scene can not be generated."""

class NoModelError(GroundVQAError):
    """Error for if a model state is not available."""

class AnswersUnavailableError(GroundVQAError):
    """Error for if oracle answers are requested on data without answers."""

class ConfigError(GroundVQAError):
    """Error for invalid settings, or settings that are inconsistent across stages."""

class OutputExistsError(GroundVQAError):
    """Error for if an output would be overwritten without being forced."""

class ExternalServiceError(GroundVQAError):
    """Base class for errors from an external answering service."""

class ExternalTimeoutError(ExternalServiceError):
    """Error for if the external service does not respond in time."""

class ExternalConnectionError(ExternalServiceError):
    """Error for if the external service can not be reached."""

class ExternalProtocolError(ExternalServiceError):
    """Error for if the external service responds with a non-success status."""

class MalformedResponseError(ExternalServiceError):
    """Error for if the external service response can not be understood."""

class StageError(GroundVQAError):
    """Error raised within a stage of the two-stage pipeline.

    Parameters
    ----------
    stage : {'vqa', 'prompt', 'sampling', 'grounding', 'expansion'}
        Label of the stage that failed.
    message : str
        Description of the failure.
    """

    def __init__(self, stage, message):

        super().__init__('[{}] {}'.format(stage, message))
        self.stage = stage
