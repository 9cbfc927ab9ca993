"""Exception hierarchy shared by every module of the package."""


class MixspecError(Exception):
    """Base class for all package errors."""


class ParseError(MixspecError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyGraphError(MixspecError, ValueError):
    pass


class DomainError(MixspecError, ValueError):
    """A numeric argument lies outside its admissible range."""


class IsolatedNodeError(MixspecError, ValueError):
    def __init__(self, node, what="degree"):
        self.node = int(node)
        super().__init__(f"node {self.node} has zero {what}; the normalized operator is undefined")


class DisconnectedGraphError(MixspecError, ValueError):
    def __init__(self, n_components):
        self.n_components = int(n_components)
        super().__init__(
            f"mixed-order graph has {self.n_components} connected components; "
            "cluster each component separately"
        )


class UndefinedCriterionError(MixspecError, ValueError):
    def __init__(self, criterion, nodes, reason="zero denominator"):
        self.criterion = str(criterion)
        self.nodes = list(nodes)
        shown = self.nodes if len(self.nodes) <= 10 else self.nodes[:10] + ["..."]
        super().__init__(f"criterion {self.criterion} undefined for S={shown}: {reason}")


class EigenSolverError(MixspecError, RuntimeError):
    def __init__(self, message, best_residual=float("nan")):
        self.best_residual = float(best_residual)
        super().__init__(f"{message} (best residual {self.best_residual:.3e})")


class ConfigError(MixspecError, ValueError):
    pass


class DatasetNotFoundError(MixspecError, FileNotFoundError):
    pass
