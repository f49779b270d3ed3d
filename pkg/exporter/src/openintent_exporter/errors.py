class ExportError(ValueError):
    """Bad input, unknown model, or unusable backend."""
