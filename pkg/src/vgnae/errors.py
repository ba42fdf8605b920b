"""Exception types shared across the package."""


class InputError(ValueError):
    """Caller passed something structurally invalid (bad shape, bad index, bad flag)."""


class StateError(RuntimeError):
    """Operation called in the wrong order (e.g. optimizer step before backward)."""


class DegenerateRowError(InputError):
    """A row scheduled for L2 normalization has (numerically) zero norm."""

    def __init__(self, row: int, norm: float):
        self.row = row
        self.norm = norm
        super().__init__(
            f"row {row} has L2 norm {norm:.3e} < 1e-12 and cannot be normalized"
        )


class LoadError(InputError):
    """A dataset bundle failed validation; carries file and line for debugging."""

    def __init__(self, path, line: int | None, message: str):
        self.path = str(path)
        self.line = line
        loc = f"{self.path}:{line}" if line is not None else self.path
        super().__init__(f"{loc}: {message}")


class DivergenceError(RuntimeError):
    """Training produced a non-finite loss."""

    def __init__(self, epoch: int, loss: float):
        self.epoch = epoch
        self.loss = loss
        super().__init__(f"non-finite loss {loss} at epoch {epoch}")
