"""Exception hierarchy shared by every stage of the pipeline."""


class ScriptGMMError(Exception):
    """Base class for all pipeline failures."""


class UnsupportedFormat(ScriptGMMError):
    pass


class CorruptImage(ScriptGMMError):
    pass


class ConstantImage(ScriptGMMError):
    """All pixels share one intensity, so no threshold separates two classes."""


class TargetTooSmall(ScriptGMMError, ValueError):
    pass


class EmptyVector(ScriptGMMError, ValueError):
    pass


class MatrixTooSmall(ScriptGMMError, ValueError):
    pass


class NonBinaryMatrix(ScriptGMMError, ValueError):
    pass


class DimensionMismatch(ScriptGMMError, ValueError):
    pass


class TooFewPoints(ScriptGMMError, ValueError):
    pass


class EmptyData(ScriptGMMError, ValueError):
    pass


class EmptyFrames(ScriptGMMError, ValueError):
    pass


class EmptyScript(ScriptGMMError, ValueError):
    pass


class UnknownLabel(ScriptGMMError, KeyError):
    pass


class InvalidSpec(ScriptGMMError, ValueError):
    pass


class ModelFormatError(ScriptGMMError, ValueError):
    """A persisted model document is malformed or has an unknown version."""
