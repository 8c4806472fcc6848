"""Exception hierarchy shared by all optigest modules."""


class SensorError(Exception):
    """Base class for every optigest-specific error."""


class OutOfRange(SensorError, ValueError):
    """A voltage lies outside [0, v_saturation]."""


class WrongArity(SensorError, ValueError):
    """A frame does not contain exactly one value per photodiode."""


class ModeMismatch(SensorError, ValueError):
    """A frame was passed to the normalizer of the other operating mode."""


class NoSignal(SensorError, ValueError):
    """An all-zero pattern where a feature needs signal mass."""


class DegenerateDistribution(SensorError, ValueError):
    """All pattern weight sits on one photodiode; spatial moments undefined."""


class FeatureSetMismatch(SensorError, ValueError):
    """A feature vector does not provide the features a model expects."""


class ModelModeMismatch(SensorError, ValueError):
    """A pose model trained for one mode applied to the other mode's frame."""


class EmptySplit(SensorError, ValueError):
    """A train/validation/test partition came out empty."""


class NonFiniteLoss(SensorError, ArithmeticError):
    """Training loss diverged to NaN or infinity."""


class SingleClass(SensorError, ValueError):
    """A binary learner received samples of only one label."""


class TooFewFeatures(SensorError, ValueError):
    """Feature selection asked for more features than are available."""


class EmptyClass(SensorError, ValueError):
    """A confusion-matrix class has zero support."""


class DegenerateTiming(SensorError, ValueError):
    """Settling time does not fit strictly inside the sampling cycle."""


class InvalidOrdering(SensorError, ValueError):
    """Power-saving comparison requires active > passive > 0."""


class MissingObstacle(SensorError, ValueError):
    """A distance sweep needs a scene with an obstacle."""


class ConfigError(SensorError, ValueError):
    """A configuration file is malformed or holds an invalid value."""


class SchemaError(SensorError, ValueError):
    """A persisted file does not match the expected schema/version."""
