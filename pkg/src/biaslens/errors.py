"""Domain exceptions shared across modules."""


class BiaslensError(Exception):
    """Base class for all domain errors."""


class SourceUnreachableError(BiaslensError):
    """A live article source or platform could not be reached."""


class EmptyStoryError(BiaslensError):
    """A story yielded no articles or no usable images; nothing persisted."""


class InsufficientSampleError(BiaslensError):
    """Too few rows for the requested model (PCA out_dim, GMM/K-means K)."""


class DimensionMismatchError(BiaslensError):
    """Descriptor/model dimensions disagree."""


class RangeInvalidError(BiaslensError):
    """A [k_min, k_max] search range violates its preconditions."""


class EmptySelectionError(BiaslensError):
    """Macro composition called with no images selected."""


class CaptionTooLongError(BiaslensError):
    """Macro caption exceeds the 280-character limit."""


class InvalidUrlError(BiaslensError):
    """A URL is not absolute http(s)."""


class LayoutError(BiaslensError):
    """Selection does not fit the requested grid."""


class CapExceededError(BiaslensError):
    """A per-user or per-hour campaign rate cap would be exceeded."""


class StaleStateError(BiaslensError):
    """A conversation event arrived out of order for its current phase."""


class IllegalTransitionError(BiaslensError):
    """A conversation phase transition outside the legal table."""


class PlatformUnavailableError(BiaslensError):
    """The social platform failed; the current tick aborts atomically."""


class PlatformSendError(BiaslensError):
    """A single outbound message failed; conversation state unchanged."""


class AlreadyIngestedError(BiaslensError):
    """Story ingestion attempted twice without the force flag."""


class UnknownStoryError(BiaslensError):
    """No persisted story under the given id."""


class UnknownCampaignError(BiaslensError):
    """No persisted campaign under the given id."""


class ProvenanceMissingError(BiaslensError):
    """A clustered image lacks its parent article record."""
