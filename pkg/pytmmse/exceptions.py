from numpy.linalg import LinAlgError


class PyTMMSEException(Exception):
    pass


class DimensionError(PyTMMSEException, ValueError):
    pass


class ConfigurationError(PyTMMSEException):
    pass


class SingularCovarianceError(PyTMMSEException, LinAlgError):
    pass
