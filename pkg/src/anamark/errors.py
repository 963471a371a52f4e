"""Exception hierarchy for the engine."""


class EngineError(Exception):
    """Base class for all engine errors."""

    code = "engine_error"


class InvalidParameterError(EngineError):
    """A configuration or algorithm parameter is out of its valid range."""

    code = "invalid_parameter"


class InvalidInputError(EngineError):
    """Inputs are malformed or mutually inconsistent (e.g. dimension mismatch)."""

    code = "invalid_input"


class InvalidCandidateError(EngineError):
    """A quad candidate is degenerate (near-zero area or self-intersecting)."""

    code = "invalid_candidate"


class DegenerateGeometryError(EngineError):
    """A geometric system is singular (collinear points, rank-deficient DLT)."""

    code = "degenerate_geometry"


class PoseFailureError(EngineError):
    """Pose could not be recovered from the homography."""

    code = "pose_failure"


class LowQualityPoseError(EngineError):
    """Recovered pose reprojects its corners worse than the acceptance threshold."""

    code = "low_quality_pose"


class BehindCameraError(EngineError):
    """A point lies at or behind the near plane."""

    code = "behind_camera"


class InvalidSpecError(EngineError):
    """A synthetic-frame spec violates its preconditions."""

    code = "invalid_spec"
