class CurveAsymError(Exception):
    """
    Base class for everything this package raises on purpose
    """


class InputError(CurveAsymError):
    """
    An argument lies outside the domain of the operation
    """


class ConfigError(InputError):
    """
    A configuration file could not be turned into a run
    """

    def __init__(self, path, *args, line_number=None, message=None, **kwargs):
        self.path = path
        self.line_number = line_number

        if not message:
            message = f"Invalid configuration in {path}"

        if line_number is not None:
            message = f"{path}:{line_number}: {message}"

        super().__init__(message, *args, **kwargs)


class ExpressionSyntaxError(InputError):
    """
    Expression text doesn't match the grammar; `offset` counts UTF-8
    bytes into `text`
    """

    def __init__(self, text, offset, *args, message=None, **kwargs):
        self.text = text
        self.offset = offset

        if not message:
            message = "Invalid syntax"

        super().__init__(
            f"{message} at offset {offset} in {text!r}", *args, **kwargs
        )


class UnknownIdentifierError(ExpressionSyntaxError):
    """
    An identifier is neither the variable, a constant nor a function
    """

    def __init__(self, text, offset, name, *args, message=None, **kwargs):
        self.name = name

        if not message:
            message = f"Unknown identifier {name!r}"

        super().__init__(text, offset, *args, message=message, **kwargs)


class NumericalError(CurveAsymError):
    """
    Base class for failures of the numerical machinery
    """


class DomainEvaluationError(NumericalError):
    """
    An expression was evaluated where it has no finite real value
    """

    def __init__(self, function, value=None, *args, message=None, **kwargs):
        self.function = function
        self.value = value

        if not message:
            message = f"{function} has no finite real value at {value}"

        super().__init__(message, *args, **kwargs)


class StencilError(NumericalError):
    """
    The central difference stencil doesn't fit inside the domain
    """

    def __init__(self, t, h, *args, message=None, **kwargs):
        self.t = t
        self.h = h

        if not message:
            message = f"No room for a difference stencil at t={t} (h={h})"

        super().__init__(message, *args, **kwargs)


class AccuracyError(NumericalError):
    """
    An iterative method stopped before reaching its tolerance
    """

    def __init__(
        self,
        best_estimate,
        error_estimate,
        *args,
        message=None,
        **kwargs,
    ):
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate

        if not message:
            message = (
                f"Tolerance not reached, best estimate {best_estimate!r} "
                f"(error estimate {error_estimate!r})"
            )

        super().__init__(message, *args, **kwargs)


class ResolutionError(NumericalError):
    """
    The scan grid is too coarse to resolve the feature searched for
    """

    def __init__(self, n_grid, *args, message=None, **kwargs):
        self.n_grid = n_grid

        if not message:
            message = "Nothing resolved on the scan grid"

        super().__init__(
            f"{message} (n_grid={n_grid}, try a larger n_grid)",
            *args,
            **kwargs,
        )


class CapabilityError(NumericalError):
    """
    The curve lacks something the operation needs (e.g. a derivative)
    """

    def __init__(self, capability, *args, message=None, **kwargs):
        self.capability = capability

        if not message:
            message = f"Curve has no {capability}"

        super().__init__(message, *args, **kwargs)


class UnderflowError(NumericalError):
    """
    A distance at the chord parameter is below the float range, so
    the chord can't be told from one of length zero
    """

    def __init__(self, t, distance, *args, message=None, **kwargs):
        self.t = t
        self.distance = distance

        if not message:
            message = (
                f"D({t}) = {distance} underflows: give the polar curve a "
                "log_rho evaluator or stop the sequence earlier"
            )

        super().__init__(message, *args, **kwargs)
